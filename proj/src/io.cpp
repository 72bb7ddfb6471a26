#include "prpca/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "prpca/error.hpp"

namespace prpca {

namespace fs = std::filesystem;

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::optional<double> to_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? text.size() - start : end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    return lines;
}

// Splits on any run of the given separators.
std::vector<std::string_view> tokens(std::string_view line, std::string_view separators) {
    std::vector<std::string_view> out;
    std::size_t k = 0;
    while (k < line.size()) {
        while (k < line.size() && separators.find(line[k]) != std::string_view::npos) ++k;
        std::size_t e = k;
        while (e < line.size() && separators.find(line[e]) == std::string_view::npos) ++e;
        if (e > k) out.push_back(line.substr(k, e - k));
        k = e;
    }
    return out;
}

std::string at_line(std::size_t n) { return "line " + std::to_string(n) + ": "; }

BoundingBox box_from_fields(const std::vector<std::string_view>& fields, const std::string& where) {
    if (fields.size() != 4) throw InputError(where + "expected 4 values x,y,w,h");
    double v[4];
    for (int k = 0; k < 4; ++k) {
        const auto d = to_double(fields[k]);
        if (!d || !std::isfinite(*d)) throw InputError(where + "not a number: '" + std::string(fields[k]) + "'");
        v[k] = *d;
    }
    if (!(v[2] > 0.0) || !(v[3] > 0.0)) throw InputError(where + "box width and height must be positive");
    return {v[0], v[1], v[2], v[3]};
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".jpg" || ext == ".jpeg" || ext == ".bmp" || ext == ".tif" || ext == ".tiff";
}

}  // namespace

GrayImage load_image(const fs::path& path) {
    const cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (raw.empty()) throw InputError("cannot decode image: " + path.string());

    double scale = 1.0;
    switch (raw.depth()) {
        case CV_8U: scale = 1.0 / 255.0; break;
        case CV_16U: scale = 1.0 / 65535.0; break;
        case CV_32F:
        case CV_64F: scale = 1.0; break;
        default: throw InputError("unsupported pixel depth: " + path.string());
    }
    cv::Mat data;
    raw.convertTo(data, CV_MAKETYPE(CV_64F, raw.channels()), scale);

    GrayImage out(data.rows, data.cols);
    const int ch = data.channels();
    for (int r = 0; r < data.rows; ++r) {
        const double* row = data.ptr<double>(r);
        for (int c = 0; c < data.cols; ++c) {
            const double* px = row + static_cast<std::ptrdiff_t>(c) * ch;
            // OpenCV stores colour as B, G, R(, A)
            const double v = ch >= 3 ? 0.114 * px[0] + 0.587 * px[1] + 0.299 * px[2] : px[0];
            out(r, c) = std::clamp(v, 0.0, 1.0);
        }
    }
    return out;
}

void save_image_png(const fs::path& path, const GrayImage& image) {
    cv::Mat out(static_cast<int>(image.rows()), static_cast<int>(image.cols()), CV_8UC1);
    for (int r = 0; r < out.rows; ++r)
        for (int c = 0; c < out.cols; ++c)
            out.at<unsigned char>(r, c) =
                static_cast<unsigned char>(std::lround(std::clamp(image(r, c), 0.0, 1.0) * 255.0));
    if (!cv::imwrite(path.string(), out)) throw InputError("cannot write image: " + path.string());
}

SequenceManifest load_sequence(const fs::path& dir, const std::optional<fs::path>& gt_path) {
    if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir.string());
    SequenceManifest m;
    m.name = dir.filename().string();
    if (m.name.empty()) m.name = dir.parent_path().filename().string();
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && is_image_file(entry.path())) m.frame_paths.push_back(entry.path());
    std::sort(m.frame_paths.begin(), m.frame_paths.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
    if (m.frame_paths.empty()) throw InputError("no images found in " + dir.string());

    for (const auto& p : m.frame_paths) {
        const GrayImage img = load_image(p);
        if (m.width == 0) {
            m.width = img.cols();
            m.height = img.rows();
        } else if (img.cols() != m.width || img.rows() != m.height) {
            throw InputError("frame size mismatch: " + p.filename().string() + " is " + std::to_string(img.cols()) +
                             "x" + std::to_string(img.rows()) + ", expected " + std::to_string(m.width) + "x" +
                             std::to_string(m.height));
        }
    }
    if (gt_path) {
        auto gt = parse_gt(read_text_file(*gt_path));
        if (gt.size() != m.frame_paths.size())
            throw InputError("ground truth has " + std::to_string(gt.size()) + " boxes for " +
                             std::to_string(m.frame_paths.size()) + " frames");
        m.ground_truth = std::move(gt);
    }
    return m;
}

std::vector<GrayImage> load_frames(const SequenceManifest& manifest) {
    std::vector<GrayImage> frames;
    frames.reserve(manifest.frame_paths.size());
    for (const auto& p : manifest.frame_paths) frames.push_back(load_image(p));
    return frames;
}

std::vector<BoundingBox> parse_gt(std::string_view text) {
    std::vector<BoundingBox> boxes;
    const auto lines = split_lines(text);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const std::string_view line = trim(lines[n]);
        if (line.empty()) continue;
        boxes.push_back(box_from_fields(tokens(line, ", \t"), at_line(n + 1)));
    }
    return boxes;
}

BoundingBox parse_box(std::string_view text) { return box_from_fields(tokens(text, ", \t"), "box: "); }

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("failed writing " + path.string());
}

std::string format_results_csv(std::span<const FrameResult> results) {
    std::string s(kResultsHeader);
    s += '\n';
    for (const auto& r : results) {
        s += std::to_string(r.frame_index) + ',' + format_number(r.box.x) + ',' + format_number(r.box.y) + ',' +
             format_number(r.box.w) + ',' + format_number(r.box.h) + ',' + format_number(r.map_likelihood) + ',' +
             format_number(r.occlusion_level) + ',' + (r.template_replaced ? "1" : "0") + '\n';
    }
    return s;
}

std::vector<ResultRow> parse_results_csv(std::string_view text) {
    const auto lines = split_lines(text);
    std::vector<ResultRow> rows;
    bool header_seen = false;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const std::string_view line = trim(lines[n]);
        if (line.empty()) continue;
        if (!header_seen) {
            if (line != kResultsHeader) throw InputError(at_line(n + 1) + "expected header '" + std::string(kResultsHeader) + "'");
            header_seen = true;
            continue;
        }
        const auto f = tokens(line, ",");
        if (f.size() != 8) throw InputError(at_line(n + 1) + "expected 8 fields");
        ResultRow row;
        const auto frame = to_double(f[0]);
        if (!frame || *frame < 1 || *frame != std::floor(*frame)) throw InputError(at_line(n + 1) + "bad frame index");
        row.frame = static_cast<std::size_t>(*frame);
        row.box = box_from_fields({f[1], f[2], f[3], f[4]}, at_line(n + 1));
        const auto lik = to_double(f[5]);
        const auto occ = to_double(f[6]);
        if (!lik || !occ) throw InputError(at_line(n + 1) + "bad numeric field");
        row.likelihood = *lik;
        row.occlusion_level = *occ;
        if (f[7] != "0" && f[7] != "1") throw InputError(at_line(n + 1) + "template_replaced must be 0 or 1");
        row.template_replaced = f[7] == "1";
        rows.push_back(row);
    }
    if (!header_seen) throw InputError("results file is empty");
    return rows;
}

namespace {

struct ConfigKey {
    std::function<void(TrackerConfig&, std::string_view, const std::string&)> set;
    std::function<std::string(const TrackerConfig&)> get;
};

double number_value(std::string_view v, const std::string& where) {
    const auto d = to_double(v);
    if (!d || !std::isfinite(*d)) throw InputError(where + "expected a number, got '" + std::string(v) + "'");
    return *d;
}

long long integer_value(std::string_view v, const std::string& where) {
    v = trim(v);
    long long out = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size())
        throw InputError(where + "expected an integer, got '" + std::string(v) + "'");
    return out;
}

bool bool_value(std::string_view v, const std::string& where) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw InputError(where + "expected true or false, got '" + std::string(v) + "'");
}

ConfigKey number_key(double TrackerConfig::*field) {
    return {[field](TrackerConfig& c, std::string_view v, const std::string& w) { c.*field = number_value(v, w); },
            [field](const TrackerConfig& c) { return format_number(c.*field); }};
}

ConfigKey int_key(int TrackerConfig::*field) {
    return {[field](TrackerConfig& c, std::string_view v, const std::string& w) {
                const long long x = integer_value(v, w);
                if (x < 0 || x > 1'000'000'000) throw InputError(w + "value out of range");
                c.*field = static_cast<int>(x);
            },
            [field](const TrackerConfig& c) { return std::to_string(c.*field); }};
}

template <class Get>
ConfigKey nested_number(Get get) {
    return {[get](TrackerConfig& c, std::string_view v, const std::string& w) { get(c) = number_value(v, w); },
            [get](const TrackerConfig& c) { return format_number(get(const_cast<TrackerConfig&>(c))); }};
}

ConfigKey optional_number(std::optional<double> SolverConfig::*field) {
    return {[field](TrackerConfig& c, std::string_view v, const std::string& w) {
                if (v == "auto")
                    c.solver.*field = std::nullopt;
                else
                    c.solver.*field = number_value(v, w);
            },
            [field](const TrackerConfig& c) {
                const auto& o = c.solver.*field;
                return o ? format_number(*o) : std::string("auto");
            }};
}

const std::vector<std::pair<std::string, ConfigKey>>& config_keys() {
    static const std::vector<std::pair<std::string, ConfigKey>> keys = {
        {"template_count", int_key(&TrackerConfig::template_count)},
        {"particle_count", int_key(&TrackerConfig::particle_count)},
        {"patch_w", int_key(&TrackerConfig::patch_w)},
        {"patch_h", int_key(&TrackerConfig::patch_h)},
        {"sigma_eps", number_key(&TrackerConfig::sigma_eps)},
        {"rng_seed",
         {[](TrackerConfig& c, std::string_view v, const std::string& w) {
              const long long x = integer_value(v, w);
              if (x < 0) throw InputError(w + "rng_seed must be nonnegative");
              c.rng_seed = static_cast<std::uint64_t>(x);
          },
          [](const TrackerConfig& c) { return std::to_string(c.rng_seed); }}},
        {"residual",
         {[](TrackerConfig& c, std::string_view v, const std::string& w) {
              if (v == "appearance")
                  c.residual = ResidualMode::kAppearance;
              else if (v == "target")
                  c.residual = ResidualMode::kTarget;
              else if (v == "reconstruction")
                  c.residual = ResidualMode::kReconstruction;
              else
                  throw InputError(w + "residual must be 'appearance', 'target' or 'reconstruction'");
          },
          [](const TrackerConfig& c) {
              switch (c.residual) {
                  case ResidualMode::kAppearance: return std::string("appearance");
                  case ResidualMode::kTarget: return std::string("target");
                  case ResidualMode::kReconstruction: break;
              }
              return std::string("reconstruction");
          }}},
        {"warm_start",
         {[](TrackerConfig& c, std::string_view v, const std::string& w) { c.warm_start = bool_value(v, w); },
          [](const TrackerConfig& c) { return std::string(c.warm_start ? "true" : "false"); }}},
        {"workers", int_key(&TrackerConfig::workers)},
        {"solver.p", nested_number([](TrackerConfig& c) -> double& { return c.solver.p; })},
        {"solver.rho", nested_number([](TrackerConfig& c) -> double& { return c.solver.rho; })},
        {"solver.mu0", optional_number(&SolverConfig::mu0)},
        {"solver.lambda", optional_number(&SolverConfig::lambda_reg)},
        {"solver.lambda_rule",
         {[](TrackerConfig& c, std::string_view v, const std::string& w) {
              if (v == "inverse_sqrt")
                  c.solver.lambda_rule = LambdaRule::kInverseSqrt;
              else if (v == "scaled_sqrt")
                  c.solver.lambda_rule = LambdaRule::kScaledSqrt;
              else
                  throw InputError(w + "solver.lambda_rule must be 'inverse_sqrt' or 'scaled_sqrt'");
          },
          [](const TrackerConfig& c) {
              return std::string(c.solver.lambda_rule == LambdaRule::kInverseSqrt ? "inverse_sqrt" : "scaled_sqrt");
          }}},
        {"solver.tol", nested_number([](TrackerConfig& c) -> double& { return c.solver.tol; })},
        {"solver.max_iter",
         {[](TrackerConfig& c, std::string_view v, const std::string& w) {
              const long long x = integer_value(v, w);
              if (x < 1) throw InputError(w + "solver.max_iter must be at least 1");
              c.solver.max_iter = static_cast<std::size_t>(x);
          },
          [](const TrackerConfig& c) { return std::to_string(c.solver.max_iter); }}},
        {"transition.var_h", nested_number([](TrackerConfig& c) -> double& { return c.transition.var_h; })},
        {"transition.var_w", nested_number([](TrackerConfig& c) -> double& { return c.transition.var_w; })},
        {"transition.var_scale", nested_number([](TrackerConfig& c) -> double& { return c.transition.var_scale; })},
        {"transition.var_aspect", nested_number([](TrackerConfig& c) -> double& { return c.transition.var_aspect; })},
        {"transition.var_angle", nested_number([](TrackerConfig& c) -> double& { return c.transition.var_angle; })},
        {"transition.var_skew", nested_number([](TrackerConfig& c) -> double& { return c.transition.var_skew; })},
        {"thresholds.psi_star", nested_number([](TrackerConfig& c) -> double& { return c.thresholds.psi_star_deg; })},
        {"thresholds.xi_star", nested_number([](TrackerConfig& c) -> double& { return c.thresholds.xi_star; })},
        {"thresholds.w_cap", nested_number([](TrackerConfig& c) -> double& { return c.thresholds.w_cap; })},
    };
    return keys;
}

}  // namespace

TrackerConfig parse_config(std::string_view text) {
    TrackerConfig cfg;
    std::map<std::string, std::size_t, std::less<>> seen;
    const auto lines = split_lines(text);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        std::string_view line = lines[n];
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "config " + at_line(n + 1);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw InputError(where + "expected 'key = value'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto& keys = config_keys();
        const auto it = std::find_if(keys.begin(), keys.end(), [&](const auto& kv) { return kv.first == key; });
        if (it == keys.end()) throw InputError(where + "unknown key '" + key + "'");
        if (const auto prev = seen.find(key); prev != seen.end())
            throw InputError(where + "key '" + key + "' already set on line " + std::to_string(prev->second));
        seen.emplace(key, n + 1);
        it->second.set(cfg, value, where);
    }
    cfg.validate();
    return cfg;
}

std::string format_config(const TrackerConfig& cfg) {
    std::string s;
    for (const auto& [key, k] : config_keys()) s += key + " = " + k.get(cfg) + '\n';
    return s;
}

Eigen::MatrixXd parse_matrix(std::string_view text) {
    std::vector<std::vector<double>> rows;
    const auto lines = split_lines(text);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const std::string_view line = trim(lines[n]);
        if (line.empty() || line.front() == '#') continue;
        std::vector<double> row;
        for (const auto tok : tokens(line, " \t,")) {
            const auto d = to_double(tok);
            if (!d) throw InputError("matrix " + at_line(n + 1) + "not a number: '" + std::string(tok) + "'");
            row.push_back(*d);
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw InputError("matrix " + at_line(n + 1) + "row length differs from the first row");
        rows.push_back(std::move(row));
    }
    if (rows.empty() || rows.front().empty()) throw InputError("matrix is empty");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    return m;
}

std::string format_matrix(const Eigen::Ref<const Eigen::MatrixXd>& m) {
    std::string s;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) s += ' ';
            s += format_number(m(r, c));
        }
        s += '\n';
    }
    return s;
}

std::string format_per_frame_csv(std::span<const BoundingBox> predicted, const SequenceMetrics& metrics) {
    if (predicted.size() != metrics.per_frame_eps0.size()) throw InputError("per-frame output: size mismatch");
    std::string s = "frame,x,y,w,h,eps0,aos\n";
    for (std::size_t k = 0; k < predicted.size(); ++k) {
        const auto& b = predicted[k];
        s += std::to_string(k + 1) + ',' + format_number(b.x) + ',' + format_number(b.y) + ',' + format_number(b.w) +
             ',' + format_number(b.h) + ',' + format_number(metrics.per_frame_eps0[k]) + ',' +
             format_number(metrics.per_frame_aos[k]) + '\n';
    }
    return s;
}

std::string format_summary_csv(const SequenceMetrics& metrics) {
    return "metric,value\nframes," + std::to_string(metrics.per_frame_eps0.size()) +
           "\nmean_eps0," + format_number(metrics.mean_eps0) + "\nmean_aos," + format_number(metrics.mean_aos) + '\n';
}

std::string format_curve_csv(const Curve& curve) {
    std::string s = "threshold,value\n";
    for (const auto& p : curve) s += format_number(p.threshold) + ',' + format_number(p.value) + '\n';
    return s;
}

Curve parse_curve_csv(std::string_view text) {
    Curve out;
    const auto lines = split_lines(text);
    bool header = false;
    for (std::size_t n = 0; n < lines.size(); ++n) {
        const std::string_view line = trim(lines[n]);
        if (line.empty()) continue;
        if (!header) {
            if (line != "threshold,value") throw InputError("curve " + at_line(n + 1) + "expected header 'threshold,value'");
            header = true;
            continue;
        }
        const auto f = tokens(line, ",");
        if (f.size() != 2) throw InputError("curve " + at_line(n + 1) + "expected 2 fields");
        const auto t = to_double(f[0]);
        const auto v = to_double(f[1]);
        if (!t || !v) throw InputError("curve " + at_line(n + 1) + "bad number");
        out.push_back({*t, *v});
    }
    if (out.empty()) throw InputError("curve file has no points");
    return out;
}

namespace {

std::string fixed(double v, int digits) {
    std::ostringstream ss;
    ss.imbue(std::locale::classic());
    ss.setf(std::ios::fixed);
    ss.precision(digits);
    ss << v;
    return ss.str();
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_curve_svg(const Curve& curve, const PlotStyle& style) {
    if (!(style.x_max > style.x_min)) throw InputError("plot: empty x range");
    constexpr double kW = 480, kH = 360, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
    const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
    auto sx = [&](double x) { return kLeft + (std::clamp(x, style.x_min, style.x_max) - style.x_min) / (style.x_max - style.x_min) * pw; };
    auto sy = [&](double y) { return kTop + (1.0 - std::clamp(y, 0.0, 1.0)) * ph; };

    std::string s;
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"360\" viewBox=\"0 0 480 360\">\n";
    s += "<rect width=\"480\" height=\"360\" fill=\"white\"/>\n";
    s += "<text x=\"240\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">" +
         xml_escape(style.title) + "</text>\n";
    // grid and tick labels, five divisions on each axis
    for (int k = 0; k <= 5; ++k) {
        const double fx = style.x_min + (style.x_max - style.x_min) * k / 5.0;
        const double fy = k / 5.0;
        s += "<line x1=\"" + fixed(sx(fx), 2) + "\" y1=\"" + fixed(kTop, 2) + "\" x2=\"" + fixed(sx(fx), 2) + "\" y2=\"" +
             fixed(kTop + ph, 2) + "\" stroke=\"#dddddd\"/>\n";
        s += "<line x1=\"" + fixed(kLeft, 2) + "\" y1=\"" + fixed(sy(fy), 2) + "\" x2=\"" + fixed(kLeft + pw, 2) +
             "\" y2=\"" + fixed(sy(fy), 2) + "\" stroke=\"#dddddd\"/>\n";
        s += "<text x=\"" + fixed(sx(fx), 2) + "\" y=\"" + fixed(kTop + ph + 16, 2) +
             "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + format_number(fx) + "</text>\n";
        s += "<text x=\"" + fixed(kLeft - 6, 2) + "\" y=\"" + fixed(sy(fy) + 4, 2) +
             "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fixed(fy, 1) + "</text>\n";
    }
    s += "<rect x=\"" + fixed(kLeft, 2) + "\" y=\"" + fixed(kTop, 2) + "\" width=\"" + fixed(pw, 2) + "\" height=\"" +
         fixed(ph, 2) + "\" fill=\"none\" stroke=\"black\"/>\n";
    s += "<text x=\"" + fixed(kLeft + pw / 2, 2) + "\" y=\"" + fixed(kH - 12, 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" + xml_escape(style.x_label) + "</text>\n";
    s += "<text x=\"16\" y=\"" + fixed(kTop + ph / 2, 2) + "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 " + fixed(kTop + ph / 2, 2) + ")\">" + xml_escape(style.y_label) +
         "</text>\n";
    s += "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < curve.size(); ++k) {
        if (k) s += ' ';
        s += fixed(sx(curve[k].threshold), 2) + ',' + fixed(sy(curve[k].value), 2);
    }
    s += "\"/>\n</svg>\n";
    return s;
}

}  // namespace prpca
