#include "prpca/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "prpca/error.hpp"
#include "prpca/eval.hpp"
#include "prpca/io.hpp"
#include "prpca/proximal.hpp"
#include "prpca/rpca_admm.hpp"
#include "prpca/tracker.hpp"

namespace prpca {

namespace fs = std::filesystem;

namespace {

int verbosity() {
    const char* v = std::getenv("PRPCA_VERBOSE");
    if (!v || !*v) return 0;
    try {
        return std::stoi(v);
    } catch (...) {
        return 1;
    }
}

class Log {
public:
    Log(std::ostream& err, int level) : err_(err), level_(level) {}
    void info(const std::string& msg) const {
        if (level_ >= 1) err_ << "[prpca] " << msg << '\n';
    }
    void debug(const std::string& msg) const {
        if (level_ >= 2) err_ << "[prpca:debug] " << msg << '\n';
    }

private:
    std::ostream& err_;
    int level_;
};

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw InputError("cannot create output directory " + dir.string());
}

std::vector<BoundingBox> boxes_of(const std::vector<ResultRow>& rows) {
    std::vector<BoundingBox> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.box);
    return out;
}

void write_metrics(const fs::path& out, std::span<const BoundingBox> predicted, std::span<const BoundingBox> gt,
                   const Log& log) {
    const SequenceMetrics m = summarize(predicted, gt);
    const auto pt = default_precision_thresholds();
    const auto st = default_success_thresholds();
    write_text_file(out / "per_frame.csv", format_per_frame_csv(predicted, m));
    write_text_file(out / "summary.csv", format_summary_csv(m));
    write_text_file(out / "precision_curve_px.csv", format_curve_csv(precision_curve(m.per_frame_distance_px, pt)));
    write_text_file(out / "success_curve.csv", format_curve_csv(success_curve(m.per_frame_aos, st)));
    log.info("mean_eps0=" + format_number(m.mean_eps0) + " mean_aos=" + format_number(m.mean_aos));
}

struct TrackArgs {
    std::string seq, box, gt, config, out;
    std::optional<int> workers;
};

void run_track(const TrackArgs& a, const Log& log) {
    TrackerConfig cfg = parse_config(read_text_file(a.config));
    if (a.workers) {
        cfg.workers = *a.workers;
        cfg.validate();
    }
    const BoundingBox box = parse_box(a.box);
    const std::optional<fs::path> gt_path = a.gt.empty() ? std::nullopt : std::optional<fs::path>(a.gt);
    const SequenceManifest manifest = load_sequence(a.seq, gt_path);
    log.info("sequence " + manifest.name + ": " + std::to_string(manifest.frame_paths.size()) + " frames of " +
             std::to_string(manifest.width) + "x" + std::to_string(manifest.height));
    const std::vector<GrayImage> frames = load_frames(manifest);

    ensure_dir(a.out);
    const auto results = track_sequence(frames, box, cfg, [&](const FrameResult& r, const Tracker&) {
        log.debug("frame " + std::to_string(r.frame_index) + " box=" + format_number(r.box.x) + "," +
                  format_number(r.box.y) + "," + format_number(r.box.w) + "," + format_number(r.box.h) +
                  " occlusion=" + format_number(r.occlusion_level) + (r.template_replaced ? " replaced" : "") +
                  (r.recovered ? " recovered" : ""));
    });
    write_text_file(fs::path(a.out) / "results.csv", format_results_csv(results));
    // workers never changes the output, so the snapshot records the default and stays byte-stable
    TrackerConfig snapshot = cfg;
    snapshot.workers = 0;
    write_text_file(fs::path(a.out) / "config_snapshot.cfg", format_config(snapshot));
    log.info("wrote " + (fs::path(a.out) / "results.csv").string());

    if (manifest.ground_truth) {
        std::vector<BoundingBox> predicted;
        for (const auto& r : results) predicted.push_back(r.box);
        write_metrics(a.out, predicted, *manifest.ground_truth, log);
    }
}

struct EvalArgs {
    std::string results, gt, out;
};

void run_eval(const EvalArgs& a, const Log& log) {
    const auto rows = parse_results_csv(read_text_file(a.results));
    const auto gt = parse_gt(read_text_file(a.gt));
    if (rows.size() != gt.size())
        throw InputError("results have " + std::to_string(rows.size()) + " rows but ground truth has " +
                         std::to_string(gt.size()) + " boxes");
    for (std::size_t k = 0; k < rows.size(); ++k)
        if (rows[k].frame != k + 1) throw InputError("results row " + std::to_string(k + 1) + " has frame index " +
                                                     std::to_string(rows[k].frame));
    ensure_dir(a.out);
    write_metrics(a.out, boxes_of(rows), gt, log);
}

struct PlotArgs {
    std::string curves, out;
};

void run_plot(const PlotArgs& a, const Log& log) {
    const fs::path dir(a.curves);
    const Curve precision = parse_curve_csv(read_text_file(dir / "precision_curve_px.csv"));
    const Curve success = parse_curve_csv(read_text_file(dir / "success_curve.csv"));
    ensure_dir(a.out);
    write_text_file(fs::path(a.out) / "precision_plot.svg",
                    render_curve_svg(precision, {"Precision plot", "Location error threshold (px)", "Precision", 0.0, 50.0}));
    write_text_file(fs::path(a.out) / "success_plot.svg",
                    render_curve_svg(success, {"Success plot", "Overlap threshold", "Success rate", 0.0, 1.0}));
    log.info("wrote plots to " + a.out);
}

struct DecomposeArgs {
    std::string matrix, out;
    double p = 0.5;
    std::optional<double> lambda, rho, mu0, tol;
    std::optional<std::size_t> max_iter;
    std::string lambda_rule = "inverse_sqrt";
};

void run_decompose(const DecomposeArgs& a, const Log& log) {
    const Eigen::MatrixXd m = parse_matrix(read_text_file(a.matrix));
    SolverConfig cfg;
    cfg.p = a.p;
    cfg.lambda_reg = a.lambda;
    cfg.mu0 = a.mu0;
    if (a.rho) cfg.rho = *a.rho;
    if (a.tol) cfg.tol = *a.tol;
    if (a.max_iter) cfg.max_iter = *a.max_iter;
    cfg.lambda_rule = a.lambda_rule == "scaled_sqrt" ? LambdaRule::kScaledSqrt : LambdaRule::kInverseSqrt;
    cfg.validate();

    IterationObserver trace;
    if (verbosity() >= 2) {
        trace = [&](const IterationRecord& r) {
            std::string g = "n/a";
            try {
                g = format_number(g_value(r.sparse, {cfg.p, r.mu}));
            } catch (const NumericError&) {
            }
            log.debug("iter " + std::to_string(r.iteration) + " mu=" + format_number(r.mu) +
                      " residual=" + format_number(r.residual) + " G(S)=" + g);
        };
    }
    const Decomposition d = decompose(m, cfg, trace);
    ensure_dir(a.out);
    const fs::path out(a.out);
    write_text_file(out / "L.txt", format_matrix(d.low_rank));
    write_text_file(out / "S.txt", format_matrix(d.sparse));
    write_text_file(out / "I.txt", format_matrix(d.multiplier));
    std::string summary;
    summary += "rows = " + std::to_string(m.rows()) + '\n';
    summary += "cols = " + std::to_string(m.cols()) + '\n';
    summary += "p = " + format_number(cfg.p) + '\n';
    summary += "lambda = " + format_number(resolve_lambda(cfg, m.rows(), m.cols())) + '\n';
    summary += "iterations = " + std::to_string(d.iterations) + '\n';
    summary += "final_residual = " + format_number(d.final_residual) + '\n';
    summary += "converged = " + std::string(d.converged ? "true" : "false") + '\n';
    write_text_file(out / "summary.txt", summary);
    log.info("decompose: " + std::to_string(d.iterations) + " iterations, residual " + format_number(d.final_residual));
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    const Log log(err, verbosity());

    CLI::App app{"Low-rank + sparse particle-filter tracker"};
    app.name("prpca");
    app.require_subcommand(1);

    TrackArgs track;
    auto* t = app.add_subcommand("track", "Track a target through an image sequence");
    t->add_option("--seq", track.seq, "Directory of frame images")->required();
    t->add_option("--box", track.box, "Initial box X,Y,W,H")->required();
    t->add_option("--gt", track.gt, "Ground-truth boxes; also writes metrics");
    t->add_option("--config", track.config, "Tracker configuration file")->required();
    t->add_option("--out", track.out, "Output directory")->required();
    t->add_option("--workers", track.workers, "Worker threads (0 = hardware concurrency)");

    EvalArgs ev;
    auto* e = app.add_subcommand("eval", "Score tracking results against ground truth");
    e->add_option("--results", ev.results, "results.csv from track")->required();
    e->add_option("--gt", ev.gt, "Ground-truth boxes")->required();
    e->add_option("--out", ev.out, "Output directory")->required();

    PlotArgs pl;
    auto* p = app.add_subcommand("plot", "Render precision and success plots as SVG");
    p->add_option("--curves", pl.curves, "Directory holding the curve CSVs from eval")->required();
    p->add_option("--out", pl.out, "Output directory")->required();

    DecomposeArgs dc;
    auto* d = app.add_subcommand("decompose", "Run the low-rank + sparse solver on a text matrix");
    d->add_option("--matrix", dc.matrix, "Whitespace-separated matrix file")->required();
    d->add_option("--p", dc.p, "Shrinkage exponent in [0, 1]")->required();
    d->add_option("--out", dc.out, "Output directory")->required();
    d->add_option("--lambda", dc.lambda, "Sparse weight (default from --lambda-rule)");
    d->add_option("--lambda-rule", dc.lambda_rule, "inverse_sqrt or scaled_sqrt")
        ->check(CLI::IsMember({"inverse_sqrt", "scaled_sqrt"}));
    d->add_option("--rho", dc.rho, "Decay of mu per sweep");
    d->add_option("--mu0", dc.mu0, "Initial mu (default 0.99 * spectral norm)");
    d->add_option("--tol", dc.tol, "Relative residual tolerance");
    d->add_option("--max-iter", dc.max_iter, "Iteration cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& ex) {
        const int code = app.exit(ex, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (*t) run_track(track, log);
        else if (*e) run_eval(ev, log);
        else if (*p) run_plot(pl, log);
        else if (*d) run_decompose(dc, log);
        return kExitOk;
    } catch (const InputError& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitInputError;
    } catch (const NumericError& ex) {
        err << "numeric failure: " << ex.what() << '\n';
        return kExitNumericError;
    } catch (const fs::filesystem_error& ex) {
        err << "error: " << ex.what() << '\n';
        return kExitInputError;
    } catch (const std::exception& ex) {
        err << "numeric failure: " << ex.what() << '\n';
        return kExitNumericError;
    }
}

}  // namespace prpca
