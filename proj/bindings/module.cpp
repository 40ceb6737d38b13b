// Copyright 2026 The pedtoolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstring>

#include "pedtoolkit/anchors.hpp"
#include "pedtoolkit/convert.hpp"
#include "pedtoolkit/error.hpp"
#include "pedtoolkit/eval.hpp"
#include "pedtoolkit/geometry.hpp"
#include "pedtoolkit/labels.hpp"
#include "pedtoolkit/mosaic.hpp"
#include "pedtoolkit/seq.hpp"
#include "pedtoolkit/vbb.hpp"
#include "pedtoolkit/version.hpp"

namespace py = pybind11;
using namespace pedtoolkit;

namespace {

std::vector<uint8_t> to_bytes(const py::bytes& data) {
  const std::string_view view = data;
  return std::vector<uint8_t>(view.begin(), view.end());
}

/// Frame record with the payload copied out, detached from the SeqFile.
struct PyFrameRecord {
  size_t index = 0;
  uint64_t byte_offset = 0;
  uint32_t payload_size = 0;
  uint32_t ts_seconds = 0;
  uint16_t ts_millis = 0;
  std::string payload;
};

PyFrameRecord detach(const FrameRecord& rec) {
  PyFrameRecord out;
  out.index = rec.index;
  out.byte_offset = rec.byte_offset;
  out.payload_size = rec.payload_size;
  out.ts_seconds = rec.ts_seconds;
  out.ts_millis = rec.ts_millis;
  out.payload.assign(rec.payload.begin(), rec.payload.end());
  return out;
}

cv::Mat mat_from_array(const py::array& image) {
  auto arr = py::array_t<uint8_t, py::array::c_style | py::array::forcecast>::ensure(image);
  if (!arr || arr.ndim() != 3 || arr.shape(2) != 3) {
    throw Error(ErrorKind::InvalidArgument, "expected an image array of shape (h, w, 3)");
  }
  cv::Mat view(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)), CV_8UC3,
               const_cast<uint8_t*>(arr.data()));
  return view.clone();
}

py::array_t<uint8_t> array_from_mat(const cv::Mat& mat) {
  py::array_t<uint8_t> out({mat.rows, mat.cols, 3});
  cv::Mat continuous = mat.isContinuous() ? mat : mat.clone();
  std::memcpy(out.mutable_data(), continuous.data,
              static_cast<size_t>(mat.rows) * static_cast<size_t>(mat.cols) * 3);
  return out;
}

std::vector<BoxSize> to_box_sizes(const std::vector<std::pair<double, double>>& pairs) {
  std::vector<BoxSize> out;
  out.reserve(pairs.size());
  for (const auto& [w, h] : pairs) out.push_back({w, h});
  return out;
}

}  // namespace

PYBIND11_MODULE(_pedtoolkit, m) {
  m.doc() = "Caltech pedestrian dataset conversion and evaluation toolkit";
  m.attr("__version__") = std::string(kToolkitVersion);

  py::register_exception<Error>(m, "ToolkitError");

  // geometry
  py::class_<Box>(m, "Box")
      .def(py::init<>())
      .def(py::init<double, double, double, double>(), py::arg("left"), py::arg("top"),
           py::arg("width"), py::arg("height"))
      .def_readwrite("left", &Box::left)
      .def_readwrite("top", &Box::top)
      .def_readwrite("width", &Box::width)
      .def_readwrite("height", &Box::height)
      .def("right", &Box::right)
      .def("bottom", &Box::bottom)
      .def("area", &Box::area)
      .def("__repr__", [](const Box& b) {
        return "Box(left=" + std::to_string(b.left) + ", top=" + std::to_string(b.top) +
               ", width=" + std::to_string(b.width) + ", height=" + std::to_string(b.height) +
               ")";
      });
  m.def("iou", &iou, py::arg("a"), py::arg("b"));

  py::class_<LetterboxTransform>(m, "LetterboxTransform")
      .def_readonly("scale", &LetterboxTransform::scale)
      .def_readonly("pad_x", &LetterboxTransform::pad_x)
      .def_readonly("pad_y", &LetterboxTransform::pad_y)
      .def_readonly("src_w", &LetterboxTransform::src_w)
      .def_readonly("src_h", &LetterboxTransform::src_h)
      .def_readonly("dst_w", &LetterboxTransform::dst_w)
      .def_readonly("dst_h", &LetterboxTransform::dst_h)
      .def("apply", &LetterboxTransform::apply, py::arg("box"))
      .def("invert", &LetterboxTransform::invert, py::arg("box"));
  m.def("letterbox_for", &letterbox_for, py::arg("src_w"), py::arg("src_h"), py::arg("dst"));

  py::class_<YoloLabel>(m, "YoloLabel")
      .def(py::init<>())
      .def(py::init<int, double, double, double, double>(), py::arg("class_id"), py::arg("cx"),
           py::arg("cy"), py::arg("w"), py::arg("h"))
      .def_readwrite("class_id", &YoloLabel::class_id)
      .def_readwrite("cx", &YoloLabel::cx)
      .def_readwrite("cy", &YoloLabel::cy)
      .def_readwrite("w", &YoloLabel::w)
      .def_readwrite("h", &YoloLabel::h)
      .def("__repr__", &format_yolo_line);
  m.def("box_to_yolo", &box_to_yolo, py::arg("box"), py::arg("transform"), py::arg("class_id"));
  m.def("yolo_to_box", &yolo_to_box, py::arg("label"), py::arg("transform"));
  m.def("format_label_file", &format_label_file, py::arg("labels"));
  m.def("parse_label_file", [](const std::string& text) { return parse_label_file(text); },
        py::arg("text"));

  // seq container
  py::class_<SeqHeader>(m, "SeqHeader")
      .def(py::init<>())
      .def_readwrite("magic", &SeqHeader::magic)
      .def_readwrite("version", &SeqHeader::version)
      .def_readwrite("description", &SeqHeader::description)
      .def_readwrite("width", &SeqHeader::width)
      .def_readwrite("height", &SeqHeader::height)
      .def_readwrite("bit_depth", &SeqHeader::bit_depth)
      .def_readwrite("bit_depth_real", &SeqHeader::bit_depth_real)
      .def_readwrite("image_size_bytes", &SeqHeader::image_size_bytes)
      .def_readwrite("image_format", &SeqHeader::image_format)
      .def_readwrite("frame_count", &SeqHeader::frame_count)
      .def_readwrite("true_image_size", &SeqHeader::true_image_size)
      .def_readwrite("fps", &SeqHeader::fps);

  py::class_<PyFrameRecord>(m, "FrameRecord")
      .def_readonly("index", &PyFrameRecord::index)
      .def_readonly("byte_offset", &PyFrameRecord::byte_offset)
      .def_readonly("payload_size", &PyFrameRecord::payload_size)
      .def_readonly("ts_seconds", &PyFrameRecord::ts_seconds)
      .def_readonly("ts_millis", &PyFrameRecord::ts_millis)
      .def_property_readonly("payload",
                             [](const PyFrameRecord& r) { return py::bytes(r.payload); });

  py::class_<SeqFile>(m, "SeqFile")
      .def_property_readonly("header", &SeqFile::header)
      .def_property_readonly("frame_count", &SeqFile::frame_count)
      .def_property_readonly("record_trailer_size", &SeqFile::record_trailer_size)
      .def("read_frame", [](const SeqFile& seq, size_t i) { return detach(seq.frame(i)); },
           py::arg("index"));
  m.def("open_seq", [](const py::bytes& data) { return open_seq(to_bytes(data)); },
        py::arg("data"));
  m.def(
      "write_seq",
      [](const SeqHeader& header, const std::vector<py::bytes>& payloads) {
        std::vector<std::vector<uint8_t>> raw;
        raw.reserve(payloads.size());
        for (const auto& p : payloads) raw.push_back(to_bytes(p));
        const auto out = write_seq(header, raw);
        return py::bytes(reinterpret_cast<const char*>(out.data()), out.size());
      },
      py::arg("header"), py::arg("payloads"));

  // vbb annotations
  py::class_<VbbObject>(m, "VbbObject")
      .def_readonly("id", &VbbObject::id)
      .def_readonly("frame", &VbbObject::frame)
      .def_readonly("pos", &VbbObject::pos)
      .def_readonly("posv", &VbbObject::posv)
      .def_readonly("occluded", &VbbObject::occluded)
      .def_readonly("locked", &VbbObject::locked)
      .def_readonly("label", &VbbObject::label);
  py::class_<VbbFile>(m, "VbbFile")
      .def_readonly("n_frame", &VbbFile::n_frame)
      .def_readonly("max_obj", &VbbFile::max_obj)
      .def_readonly("labels", &VbbFile::labels)
      .def_property_readonly("objects",
                             [](const VbbFile& vbb) {
                               std::vector<VbbObject> flat;
                               for (const auto& frame : vbb.obj_lists) {
                                 flat.insert(flat.end(), frame.begin(), frame.end());
                               }
                               return flat;
                             })
      .def("objects_in_frame",
           [](const VbbFile& vbb, size_t frame) {
             if (frame >= vbb.obj_lists.size()) {
               throw Error(ErrorKind::IndexOutOfRange, "frame " + std::to_string(frame));
             }
             return vbb.obj_lists[frame];
           },
           py::arg("frame"))
      .def("object_count", &VbbFile::object_count)
      .def("to_json", &vbb_to_json);
  m.def("parse_vbb", [](const py::bytes& data) { return parse_vbb(to_bytes(data)); },
        py::arg("data"));
  m.def("vbb_to_json", &vbb_to_json, py::arg("vbb"));
  m.def("lint_vbb", &lint_vbb, py::arg("vbb"));

  // mosaic
  py::class_<MosaicSpec>(m, "MosaicSpec")
      .def(py::init<>())
      .def_readwrite("size", &MosaicSpec::size)
      .def_readwrite("center_x", &MosaicSpec::center_x)
      .def_readwrite("center_y", &MosaicSpec::center_y)
      .def_readwrite("seed", &MosaicSpec::seed)
      .def_readwrite("min_box_side", &MosaicSpec::min_box_side)
      .def_static("sampled", &MosaicSpec::sampled, py::arg("size"), py::arg("seed"),
                  py::arg("min_box_side") = 2.0);
  m.def(
      "mosaic",
      [](const std::vector<py::array>& images,
         const std::vector<std::vector<YoloLabel>>& labels, const MosaicSpec& spec) {
        if (images.size() != labels.size()) {
          throw Error(ErrorKind::WrongArity, "need one label list per image");
        }
        std::vector<LabeledImage> inputs;
        inputs.reserve(images.size());
        for (size_t i = 0; i < images.size(); ++i) {
          inputs.push_back({mat_from_array(images[i]), labels[i]});
        }
        const MosaicResult result = mosaic(inputs, spec);
        return py::make_tuple(array_from_mat(result.image), result.labels);
      },
      py::arg("images"), py::arg("labels"), py::arg("spec"));

  // anchors
  py::class_<AnchorSet>(m, "AnchorSet")
      .def_property_readonly("anchors",
                             [](const AnchorSet& set) {
                               std::vector<std::pair<double, double>> out;
                               for (const auto& a : set.anchors) out.push_back({a.w, a.h});
                               return out;
                             })
      .def_readonly("reference_size", &AnchorSet::reference_size)
      .def_readonly("bpr", &AnchorSet::bpr);
  m.def(
      "kmeans_anchors",
      [](const std::vector<std::pair<double, double>>& boxes, int k, uint64_t seed,
         double reference_size) {
        const auto sizes = to_box_sizes(boxes);
        return kmeans_anchors(sizes, k, seed, reference_size);
      },
      py::arg("boxes"), py::arg("k") = 9, py::arg("seed") = 0,
      py::arg("reference_size") = 640.0);
  m.def(
      "best_possible_recall",
      [](const std::vector<std::pair<double, double>>& anchors,
         const std::vector<std::pair<double, double>>& boxes, double ratio_threshold) {
        const auto a = to_box_sizes(anchors);
        const auto b = to_box_sizes(boxes);
        return best_possible_recall(a, b, ratio_threshold);
      },
      py::arg("anchors"), py::arg("boxes"), py::arg("ratio_threshold") = 4.0);

  // evaluation
  py::class_<Detection>(m, "Detection")
      .def(py::init<>())
      .def(py::init([](const std::string& image_id, int class_id, double confidence,
                       const Box& box) {
             return Detection{image_id, class_id, confidence, box};
           }),
           py::arg("image_id"), py::arg("class_id"), py::arg("confidence"), py::arg("box"))
      .def_readwrite("image_id", &Detection::image_id)
      .def_readwrite("class_id", &Detection::class_id)
      .def_readwrite("confidence", &Detection::confidence)
      .def_readwrite("box", &Detection::box);
  py::class_<GtBox>(m, "GtBox")
      .def(py::init<>())
      .def(py::init([](const std::string& image_id, int class_id, const Box& box) {
             return GtBox{image_id, class_id, box};
           }),
           py::arg("image_id"), py::arg("class_id"), py::arg("box"))
      .def_readwrite("image_id", &GtBox::image_id)
      .def_readwrite("class_id", &GtBox::class_id)
      .def_readwrite("box", &GtBox::box);

  py::enum_<MatchFlag>(m, "MatchFlag")
      .value("FALSE_POSITIVE", MatchFlag::FalsePositive)
      .value("TRUE_POSITIVE", MatchFlag::TruePositive)
      .value("IGNORED", MatchFlag::Ignored);
  py::class_<MatchResult>(m, "MatchResult")
      .def_readonly("flags", &MatchResult::flags)
      .def_readonly("false_negatives", &MatchResult::false_negatives);
  m.def(
      "match_detections",
      [](const std::vector<Detection>& dets, const std::vector<Box>& gts,
         const std::vector<Box>& ignores, double iou_threshold) {
        return match_detections(dets, gts, ignores, iou_threshold);
      },
      py::arg("detections"), py::arg("gts"), py::arg("ignores") = std::vector<Box>{},
      py::arg("iou_threshold") = 0.5);

  m.def("precision", &precision, py::arg("tp"), py::arg("fp"));
  m.def("recall", &recall, py::arg("tp"), py::arg("fn"));
  m.def("f1_score", &f1_score, py::arg("precision"), py::arg("recall"));

  py::class_<PrPoint>(m, "PrPoint")
      .def_readonly("threshold", &PrPoint::threshold)
      .def_readonly("tp", &PrPoint::tp)
      .def_readonly("fp", &PrPoint::fp)
      .def_readonly("fn", &PrPoint::fn)
      .def_readonly("precision", &PrPoint::precision)
      .def_readonly("recall", &PrPoint::recall);
  m.def(
      "pr_curve",
      [](const std::vector<Detection>& dets, const std::vector<GtBox>& gts,
         const std::vector<GtBox>& ignores, double iou_threshold, bool use_ignores) {
        return pr_curve(dets, gts, ignores, iou_threshold, use_ignores);
      },
      py::arg("detections"), py::arg("gts"), py::arg("ignores") = std::vector<GtBox>{},
      py::arg("iou_threshold") = 0.5, py::arg("use_ignores") = true);
  m.def(
      "average_precision",
      [](const std::vector<PrPoint>& curve, bool envelope) {
        return average_precision(curve, envelope);
      },
      py::arg("curve"), py::arg("envelope") = true);
  m.def(
      "mean_average_precision",
      [](const std::vector<double>& aps) { return mean_average_precision(aps); },
      py::arg("class_aps"));

  py::class_<ClassReport>(m, "ClassReport")
      .def_readonly("class_id", &ClassReport::class_id)
      .def_readonly("ap", &ClassReport::ap_main)
      .def_readonly("ap_by_iou", &ClassReport::ap_by_iou)
      .def_readonly("ground_truths", &ClassReport::ground_truths)
      .def_readonly("detections", &ClassReport::detections);
  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("iou_threshold", &EvalReport::iou_threshold)
      .def_readonly("iou_range", &EvalReport::iou_range)
      .def_readonly("classes", &EvalReport::classes)
      .def_readonly("map", &EvalReport::map_main)
      .def_readonly("map_ranged", &EvalReport::map_ranged)
      .def_readonly("best_f1", &EvalReport::best_f1)
      .def_readonly("best_f1_threshold", &EvalReport::best_f1_threshold)
      .def_readonly("best_f1_precision", &EvalReport::best_f1_precision)
      .def_readonly("best_f1_recall", &EvalReport::best_f1_recall)
      .def_readonly("curve", &EvalReport::curve)
      .def_readonly("images", &EvalReport::images)
      .def_readonly("detections", &EvalReport::detections)
      .def_readonly("ground_truths", &EvalReport::ground_truths)
      .def_readonly("ignore_regions", &EvalReport::ignore_regions)
      .def("to_json", &report_to_json);
  m.def(
      "evaluate",
      [](const std::vector<Detection>& dets, const std::vector<GtBox>& gts,
         const std::vector<GtBox>& ignores, double iou_threshold, bool envelope,
         bool use_ignores) {
        EvalOptions options;
        options.iou_threshold = iou_threshold;
        options.envelope = envelope;
        options.use_ignores = use_ignores;
        return evaluate(dets, gts, ignores, options);
      },
      py::arg("detections"), py::arg("gts"), py::arg("ignores") = std::vector<GtBox>{},
      py::arg("iou_threshold") = 0.5, py::arg("envelope") = true,
      py::arg("use_ignores") = true);
  m.def(
      "map_over_iou_range",
      [](const std::vector<Detection>& dets, const std::vector<GtBox>& gts,
         const std::vector<GtBox>& ignores, bool use_ignores) {
        return map_over_iou_range(dets, gts, ignores, use_ignores);
      },
      py::arg("detections"), py::arg("gts"), py::arg("ignores") = std::vector<GtBox>{},
      py::arg("use_ignores") = true);

  // dataset conversion
  m.def(
      "convert_dataset",
      [](const std::filesystem::path& root, const std::filesystem::path& out, int stride,
         int target_size, const std::vector<std::string>& keep_classes,
         const std::vector<std::string>& ignore_classes, const std::string& occlusion_policy,
         double min_box_height, int jobs, const std::string& splits) {
        ConvertConfig config;
        config.stride = stride;
        config.target_size = target_size;
        config.keep_classes = keep_classes;
        config.ignore_classes = ignore_classes;
        if (occlusion_policy == "visible") {
          config.occlusion_policy = ConvertConfig::BoxSource::VisibleBox;
        } else if (occlusion_policy != "full") {
          throw Error(ErrorKind::InvalidArgument, "occlusion_policy must be full or visible");
        }
        config.min_box_height = min_box_height;
        config.jobs = jobs;
        const SplitSpec spec =
            splits.empty() ? SplitSpec::caltech_default() : SplitSpec::parse(splits);
        py::gil_scoped_release release;
        const Manifest manifest = convert_dataset(root, out, config, spec);
        return manifest.to_json();
      },
      py::arg("root"), py::arg("out"), py::arg("stride") = 30, py::arg("target_size") = 640,
      py::arg("keep_classes") = std::vector<std::string>{"person"},
      py::arg("ignore_classes") = std::vector<std::string>{"people", "person?", "person-fa"},
      py::arg("occlusion_policy") = "full", py::arg("min_box_height") = 0.0,
      py::arg("jobs") = 0, py::arg("splits") = "",
      "Convert a Caltech-layout tree to YOLO training data; returns the manifest as a JSON "
      "string.");
}
