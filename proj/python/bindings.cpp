#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "prpca/error.hpp"
#include "prpca/eval.hpp"
#include "prpca/io.hpp"
#include "prpca/proximal.hpp"
#include "prpca/rpca_admm.hpp"
#include "prpca/synthetic.hpp"
#include "prpca/tracker.hpp"

namespace py = pybind11;
using namespace prpca;

namespace {

py::tuple box_tuple(const BoundingBox& b) { return py::make_tuple(b.x, b.y, b.w, b.h); }

BoundingBox to_box(const std::vector<double>& v) {
    if (v.size() != 4) throw InputError("box needs four values x, y, w, h");
    return {v[0], v[1], v[2], v[3]};
}

std::vector<BoundingBox> to_boxes(const std::vector<std::vector<double>>& v) {
    std::vector<BoundingBox> out;
    out.reserve(v.size());
    for (const auto& b : v) out.push_back(to_box(b));
    return out;
}

py::list curve_list(const Curve& c) {
    py::list out;
    for (const auto& p : c) out.append(py::make_tuple(p.threshold, p.value));
    return out;
}

}  // namespace

PYBIND11_MODULE(_prpca, m) {
    m.doc() = "Low-rank + sparse appearance tracker";

    auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "NumericError", PyExc_ArithmeticError);
    (void)input_error;

    m.def("p_shrink", &p_shrink, py::arg("x"), py::arg("threshold"), py::arg("p"));
    m.def(
        "p_shrink_matrix", [](const Eigen::MatrixXd& x, double t, double p) { return p_shrink_matrix(x, t, p); },
        py::arg("x"), py::arg("threshold"), py::arg("p"));
    m.def(
        "h_value", [](double t, double p, double mu) { return h_value(t, {p, mu}); }, py::arg("t"), py::arg("p"),
        py::arg("mu"));
    m.def("default_lambda", &default_lambda, py::arg("rows"), py::arg("templates"));

    py::class_<Decomposition>(m, "Decomposition")
        .def_readonly("low_rank", &Decomposition::low_rank)
        .def_readonly("sparse", &Decomposition::sparse)
        .def_readonly("multiplier", &Decomposition::multiplier)
        .def_readonly("iterations", &Decomposition::iterations)
        .def_readonly("final_residual", &Decomposition::final_residual)
        .def_readonly("converged", &Decomposition::converged);

    m.def(
        "decompose",
        [](const Eigen::MatrixXd& mat, double p, std::optional<double> lambda_reg, double rho, std::optional<double> mu0,
           double tol, std::size_t max_iter) {
            SolverConfig cfg;
            cfg.p = p;
            cfg.lambda_reg = lambda_reg;
            cfg.rho = rho;
            cfg.mu0 = mu0;
            cfg.tol = tol;
            cfg.max_iter = max_iter;
            py::gil_scoped_release release;
            return decompose(mat, cfg);
        },
        py::arg("m"), py::arg("p") = 0.5, py::arg("lambda_reg") = py::none(), py::arg("rho") = 0.9,
        py::arg("mu0") = py::none(), py::arg("tol") = 1e-5, py::arg("max_iter") = 500);

    m.def(
        "make_low_rank_sparse",
        [](Eigen::Index rows, Eigen::Index cols, Eigen::Index rank, double density, double lo, double hi,
           std::uint64_t seed) {
            const auto inst = make_low_rank_sparse(rows, cols, rank, density, lo, hi, seed);
            return py::make_tuple(inst.low_rank, inst.sparse, inst.observed);
        },
        py::arg("rows"), py::arg("cols"), py::arg("rank"), py::arg("density"), py::arg("lo"), py::arg("hi"),
        py::arg("seed"));

    m.def(
        "aos", [](const std::vector<double>& a, const std::vector<double>& b) { return aos(to_box(a), to_box(b)); },
        py::arg("pred"), py::arg("gt"));
    m.def(
        "center_error",
        [](const std::vector<double>& a, const std::vector<double>& b) { return center_error(to_box(a), to_box(b)); },
        py::arg("pred"), py::arg("gt"));
    m.def(
        "precision_curve",
        [](const std::vector<double>& e, std::optional<std::vector<double>> t) {
            return curve_list(precision_curve(e, t ? *t : default_precision_thresholds()));
        },
        py::arg("errors_px"), py::arg("thresholds") = py::none());
    m.def(
        "success_curve",
        [](const std::vector<double>& a, std::optional<std::vector<double>> t) {
            return curve_list(success_curve(a, t ? *t : default_success_thresholds()));
        },
        py::arg("aos_values"), py::arg("thresholds") = py::none());
    m.def(
        "summarize",
        [](const std::vector<std::vector<double>>& pred, const std::vector<std::vector<double>>& gt) {
            const SequenceMetrics s = summarize(to_boxes(pred), to_boxes(gt));
            py::dict d;
            d["per_frame_eps0"] = s.per_frame_eps0;
            d["per_frame_aos"] = s.per_frame_aos;
            d["per_frame_distance_px"] = s.per_frame_distance_px;
            d["mean_eps0"] = s.mean_eps0;
            d["mean_aos"] = s.mean_aos;
            return d;
        },
        py::arg("predicted"), py::arg("gt"));

    m.def(
        "square_sequence",
        [](int frames, std::uint64_t seed) {
            SquareSequenceSpec spec;
            spec.frames = frames;
            spec.seed = seed;
            const auto seq = make_square_sequence(spec);
            py::list boxes;
            for (const auto& b : seq.ground_truth) boxes.append(box_tuple(b));
            return py::make_tuple(seq.frames, boxes);
        },
        py::arg("frames") = 100, py::arg("seed") = 7);

    m.def("parse_config", &parse_config, py::arg("text"));
    py::class_<TrackerConfig>(m, "TrackerConfig")
        .def(py::init<>())
        .def_readwrite("template_count", &TrackerConfig::template_count)
        .def_readwrite("particle_count", &TrackerConfig::particle_count)
        .def_readwrite("patch_w", &TrackerConfig::patch_w)
        .def_readwrite("patch_h", &TrackerConfig::patch_h)
        .def_readwrite("sigma_eps", &TrackerConfig::sigma_eps)
        .def_readwrite("rng_seed", &TrackerConfig::rng_seed)
        .def_readwrite("workers", &TrackerConfig::workers)
        .def("__str__", &format_config);

    m.def(
        "track",
        [](const std::vector<GrayImage>& frames, const std::vector<double>& box, const TrackerConfig& cfg) {
            std::vector<FrameResult> results;
            {
                py::gil_scoped_release release;
                results = track_sequence(frames, to_box(box), cfg);
            }
            py::list out;
            for (const auto& r : results) {
                py::dict d;
                d["frame"] = r.frame_index;
                d["box"] = box_tuple(r.box);
                d["likelihood"] = r.map_likelihood;
                d["occlusion_level"] = r.occlusion_level;
                d["template_replaced"] = r.template_replaced;
                out.append(d);
            }
            return out;
        },
        py::arg("frames"), py::arg("box"), py::arg("config") = TrackerConfig{});
}
