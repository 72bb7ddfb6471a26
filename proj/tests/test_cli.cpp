#include <doctest.h>

#include <cstdlib>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "prpca/cli.hpp"
#include "prpca/io.hpp"
#include "prpca/synthetic.hpp"
#include "support/temp_dir.hpp"

using namespace prpca;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run cli(std::initializer_list<std::string> args) {
    std::vector<std::string> store{"prpca"};
    store.insert(store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : store) argv.push_back(s.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string summary_value(const std::string& text, const std::string& key) {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        if (line.rfind(key + " = ", 0) == 0) return line.substr(key.size() + 3);
    return {};
}

// Six-frame square sequence plus gt.txt and a fast config.
void write_fixture(const TempDir& dir) {
    SquareSequenceSpec spec;
    spec.frames = 6;
    const auto seq = make_square_sequence(spec);
    fs::create_directories(dir / "seq");
    std::string gt;
    for (std::size_t k = 0; k < seq.frames.size(); ++k) {
        save_image_png(dir.path() / "seq" / ("f" + std::to_string(k) + ".png"), seq.frames[k]);
        const auto& b = seq.ground_truth[k];
        gt += format_number(b.x) + "," + format_number(b.y) + "," + format_number(b.w) + "," + format_number(b.h) + "\n";
    }
    write_text_file(dir / "gt.txt", gt);
    write_text_file(dir / "run.cfg", "particle_count = 20\ntemplate_count = 5\npatch_w = 12\npatch_h = 12\nrng_seed = 3\n");
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(cli({}).code == kExitInputError);
    CHECK(cli({"--help"}).code == kExitOk);
    CHECK(cli({"frobnicate"}).code == kExitInputError);
    CHECK(cli({"decompose", "--matrix", "x.txt", "--p", "1", "--out", "o", "--bogus"}).code == kExitInputError);
    const Run missing = cli({"decompose", "--p", "1", "--out", "o"});
    CHECK(missing.code == kExitInputError);
    CHECK(missing.err.find("--matrix") != std::string::npos);
}

TEST_CASE("decompose writes the factor matrices") {
    const TempDir dir("cli_dec");
    const auto inst = make_low_rank_sparse(64, 11, 2, 0.05, 0.5, 1.5, 1);
    write_text_file(dir / "m.txt", format_matrix(inst.observed));

    for (const char* p : {"1", "0.5"}) {
        const fs::path out = dir / (std::string("out_") + p);
        const Run r = cli({"decompose", "--matrix", (dir / "m.txt").string(), "--p", p, "--out", out.string()});
        REQUIRE(r.code == kExitOk);
        const Eigen::MatrixXd l = parse_matrix(read_text_file(out / "L.txt"));
        const Eigen::MatrixXd s = parse_matrix(read_text_file(out / "S.txt"));
        const Eigen::MatrixXd i = parse_matrix(read_text_file(out / "I.txt"));
        CHECK(l.rows() == 64);
        CHECK(s.cols() == 11);
        CHECK(i.rows() == 64);
        const std::string summary = read_text_file(out / "summary.txt");
        CHECK(summary_value(summary, "converged") == "true");
        CHECK(summary_value(summary, "rows") == "64");
        CHECK(std::stod(summary_value(summary, "final_residual")) < 1e-5);
        const std::string p_text = p;
        CAPTURE(p_text);
        CHECK((l - inst.low_rank).norm() / inst.low_rank.norm() <= 1e-2);
    }
}

TEST_CASE("decompose input and numeric failures") {
    const TempDir dir("cli_dec_err");
    CHECK(cli({"decompose", "--matrix", (dir / "none.txt").string(), "--p", "1", "--out", (dir / "o").string()}).code ==
          kExitInputError);
    write_text_file(dir / "ragged.txt", "1 2 3\n4 5\n");
    const Run ragged = cli({"decompose", "--matrix", (dir / "ragged.txt").string(), "--p", "1", "--out", (dir / "o").string()});
    CHECK(ragged.code == kExitInputError);
    CHECK(ragged.err.find("line 2") != std::string::npos);
    write_text_file(dir / "ok.txt", "1 2\n3 4\n");
    CHECK(cli({"decompose", "--matrix", (dir / "ok.txt").string(), "--p", "1.5", "--out", (dir / "o").string()}).code ==
          kExitInputError);
    write_text_file(dir / "big.txt", "1e308 1e308\n1e308 1e308\n");
    CHECK(cli({"decompose", "--matrix", (dir / "big.txt").string(), "--p", "1", "--out", (dir / "o").string()}).code ==
          kExitNumericError);
}

TEST_CASE("decompose output is byte-stable") {
    const TempDir dir("cli_stable");
    write_text_file(dir / "m.txt", format_matrix(make_low_rank_sparse(32, 8, 2, 0.05, 0.5, 1.5, 9).observed));
    const std::string m = (dir / "m.txt").string();
    REQUIRE(cli({"decompose", "--matrix", m, "--p", "0.5", "--out", (dir / "a").string()}).code == 0);
    REQUIRE(cli({"decompose", "--matrix", m, "--p", "0.5", "--out", (dir / "b").string()}).code == 0);
    for (const char* f : {"L.txt", "S.txt", "I.txt", "summary.txt"})
        CHECK(read_text_file(dir / "a" / f) == read_text_file(dir / "b" / f));
}

TEST_CASE("eval on perfect results") {
    const TempDir dir("cli_eval");
    const std::vector<BoundingBox> gt{{1, 2, 10, 12}, {3, 2, 10, 12}, {5, 2.5, 10, 12}};
    std::vector<FrameResult> results(gt.size());
    for (std::size_t k = 0; k < gt.size(); ++k) {
        results[k].frame_index = k + 1;
        results[k].box = gt[k];
    }
    write_text_file(dir / "results.csv", format_results_csv(results));
    write_text_file(dir / "gt.txt", "1,2,10,12\n3 2 10 12\n5,2.5,10,12\n");
    const Run r = cli({"eval", "--results", (dir / "results.csv").string(), "--gt", (dir / "gt.txt").string(), "--out",
                       (dir / "ev").string()});
    REQUIRE(r.code == kExitOk);
    const std::string summary = read_text_file(dir / "ev" / "summary.csv");
    CHECK(summary.find("mean_aos,1\n") != std::string::npos);
    CHECK(summary.find("mean_eps0,0\n") != std::string::npos);
    CHECK(fs::exists(dir / "ev" / "per_frame.csv"));

    write_text_file(dir / "gt_short.txt", "1,2,10,12\n");
    CHECK(cli({"eval", "--results", (dir / "results.csv").string(), "--gt", (dir / "gt_short.txt").string(), "--out",
               (dir / "ev2").string()})
              .code == kExitInputError);

    const Run plot = cli({"plot", "--curves", (dir / "ev").string(), "--out", (dir / "plots").string()});
    REQUIRE(plot.code == kExitOk);
    CHECK(read_text_file(dir / "plots" / "precision_plot.svg").rfind("<svg", 0) == 0);
    CHECK(fs::exists(dir / "plots" / "success_plot.svg"));
    CHECK(cli({"plot", "--curves", (dir / "nothing").string(), "--out", (dir / "p2").string()}).code == kExitInputError);
}

TEST_CASE("track end to end") {
    const TempDir dir("cli_track");
    write_fixture(dir);
    const auto track = [&](const fs::path& cfg, const std::string& out) {
        return cli({"track", "--seq", (dir / "seq").string(), "--box", "10,54,20,20", "--gt", (dir / "gt.txt").string(),
                    "--config", cfg.string(), "--out", (dir / out).string()});
    };
    const Run r = track(dir / "run.cfg", "a");
    REQUIRE(r.code == kExitOk);
    const auto rows = parse_results_csv(read_text_file(dir / "a" / "results.csv"));
    REQUIRE(rows.size() == 6);
    CHECK(rows[0].box == BoundingBox{10, 54, 20, 20});
    for (std::size_t k = 0; k < rows.size(); ++k) CHECK(rows[k].frame == k + 1);
    CHECK(fs::exists(dir / "a" / "summary.csv"));

    // the snapshot alone reproduces the run byte for byte
    const Run again = track(dir / "a" / "config_snapshot.cfg", "b");
    REQUIRE(again.code == kExitOk);
    CHECK(read_text_file(dir / "a" / "results.csv") == read_text_file(dir / "b" / "results.csv"));
    CHECK(read_text_file(dir / "a" / "summary.csv") == read_text_file(dir / "b" / "summary.csv"));
    CHECK(parse_config(read_text_file(dir / "a" / "config_snapshot.cfg")).rng_seed == 3);

    // eval re-reads the written boxes and agrees with track's own metrics
    const Run ev = cli({"eval", "--results", (dir / "a" / "results.csv").string(), "--gt", (dir / "gt.txt").string(),
                        "--out", (dir / "ev").string()});
    REQUIRE(ev.code == kExitOk);
    CHECK(read_text_file(dir / "ev" / "summary.csv") == read_text_file(dir / "a" / "summary.csv"));
    CHECK(read_text_file(dir / "ev" / "per_frame.csv") == read_text_file(dir / "a" / "per_frame.csv"));
}

TEST_CASE("track input errors") {
    const TempDir dir("cli_track_err");
    write_fixture(dir);
    const auto track = [&](const std::string& box, const fs::path& cfg) {
        return cli({"track", "--seq", (dir / "seq").string(), "--box", box, "--config", cfg.string(), "--out",
                    (dir / "o").string()})
            .code;
    };
    CHECK(track("10,54,20", dir / "run.cfg") == kExitInputError);
    CHECK(track("10,54,0,20", dir / "run.cfg") == kExitInputError);
    CHECK(track("500,54,20,20", dir / "run.cfg") == kExitInputError);
    CHECK(track("10,54,20,20", dir / "missing.cfg") == kExitInputError);
    write_text_file(dir / "typo.cfg", "particle_cuont = 20\n");
    const Run typo = cli({"track", "--seq", (dir / "seq").string(), "--box", "10,54,20,20", "--config",
                          (dir / "typo.cfg").string(), "--out", (dir / "o").string()});
    CHECK(typo.code == kExitInputError);
    CHECK(typo.err.find("particle_cuont") != std::string::npos);
}

TEST_CASE("verbosity comes from the environment") {
    const TempDir dir("cli_verbose");
    write_text_file(dir / "ok.txt", "1 2\n3 4\n");
    const std::string m = (dir / "ok.txt").string(), out = (dir / "o").string();
    ::setenv("PRPCA_VERBOSE", "0", 1);
    const Run quiet = cli({"decompose", "--matrix", m, "--p", "1", "--out", out});
    ::setenv("PRPCA_VERBOSE", "2", 1);
    const Run loud = cli({"decompose", "--matrix", m, "--p", "1", "--out", out});
    ::unsetenv("PRPCA_VERBOSE");
    CHECK(quiet.code == 0);
    CHECK(loud.code == 0);
    CHECK(quiet.err.empty());
    CHECK(loud.err.find("iter") != std::string::npos);
}
