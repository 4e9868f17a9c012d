#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sip/io.hpp"
#include "sip/pipeline.hpp"
#include "sip/synthetic.hpp"

namespace {

using sip::ErrorCode;
using sip::fail;

std::string basename_of(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = name.find_last_of('.');
    return dot == std::string::npos ? name : name.substr(0, dot);
}

using ConfigMap = std::map<std::string, std::string>;

std::string want(const ConfigMap& cfg, const std::string& key) {
    auto it = cfg.find(key);
    if (it == cfg.end())
        fail(ErrorCode::InvalidConfig, "config is missing required key '" + key + "'");
    return it->second;
}

std::string get_str(const ConfigMap& cfg, const std::string& key, const std::string& dflt) {
    auto it = cfg.find(key);
    return it == cfg.end() ? dflt : it->second;
}

double to_double(const std::string& v, const std::string& key) {
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        fail(ErrorCode::InvalidConfig, "config key '" + key + "': bad number '" + v + "'");
    return x;
}

std::uint64_t to_u64(const std::string& v, const std::string& key) {
    char* end = nullptr;
    unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        fail(ErrorCode::InvalidConfig, "config key '" + key + "': bad integer '" + v + "'");
    return x;
}

double get_double(const ConfigMap& cfg, const std::string& key, double dflt) {
    auto it = cfg.find(key);
    return it == cfg.end() ? dflt : to_double(it->second, key);
}

std::uint64_t get_u64(const ConfigMap& cfg, const std::string& key, std::uint64_t dflt) {
    auto it = cfg.find(key);
    return it == cfg.end() ? dflt : to_u64(it->second, key);
}

std::vector<double> parse_double_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::string cur;
    std::stringstream ss(v);
    while (std::getline(ss, cur, ',')) out.push_back(to_double(cur, key));
    if (out.empty()) fail(ErrorCode::InvalidConfig, "config key '" + key + "': empty list");
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& v, const std::string& key) {
    std::vector<std::size_t> out;
    std::string cur;
    std::stringstream ss(v);
    while (std::getline(ss, cur, ','))
        out.push_back(static_cast<std::size_t>(to_u64(cur, key)));
    if (out.empty()) fail(ErrorCode::InvalidConfig, "config key '" + key + "': empty list");
    return out;
}

sip::SyntheticConfig parse_synthetic(const ConfigMap& cfg) {
    sip::SyntheticConfig out;
    std::string family = get_str(cfg, "family", "gaussian");
    if (family == "gaussian") {
        out.family = sip::Family::Gaussian;
    } else if (family == "student_t") {
        out.family = sip::Family::StudentT;
        out.nu = to_double(want(cfg, "nu"), "nu");
    } else {
        fail(ErrorCode::InvalidConfig, "family must be 'gaussian' or 'student_t'");
    }
    out.d = static_cast<std::size_t>(to_u64(want(cfg, "d"), "d"));
    out.k = static_cast<std::size_t>(get_u64(cfg, "k", 1));
    out.mean_scale = to_double(want(cfg, "mean_scale"), "mean_scale");
    out.scale_spectrum = parse_double_list(want(cfg, "spectrum"), "spectrum");
    out.seed = get_u64(cfg, "seed", 0);
    out.validate();
    return out;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    return out;
}

int run_experiment(const std::string& name, const std::string& config_path,
                   const std::string& out_dir) {
    ConfigMap cfg = config_path.empty() ? ConfigMap{} : sip::read_config(config_path);
    auto out_path = [&](const std::string& file) { return out_dir + "/" + file; };
    std::size_t seeds = static_cast<std::size_t>(get_u64(cfg, "seeds", 100));

    if (name == "subspace") {
        sip::SyntheticConfig sc = parse_synthetic(cfg);
        std::vector<std::size_t> n_grid =
            parse_size_list(get_str(cfg, "n_grid", "100,180,320,560,1000"), "n_grid");
        sip::ExperimentSeries s = sip::run_subspace_experiment(sc, n_grid, seeds);
        sip::write_series_csv(out_path("subspace.csv"), s);
        std::size_t viol = 0, inside = 0;
        for (std::size_t i = 0; i < s.x.size(); ++i)
            if (s.x[i] < 1.0) {
                ++inside;
                if (s.y_mean[i] > s.x[i]) ++viol;
            }
        std::printf("subspace: %zu points, %zu below ratio 1, %zu bound violations\n",
                    s.x.size(), inside, viol);
        return viol == 0 ? 0 : 1;
    }

    if (name == "phase") {
        sip::SyntheticConfig sc = parse_synthetic(cfg);
        std::size_t n_star = static_cast<std::size_t>(get_u64(cfg, "n_star", 500));
        double delta_cal = get_double(cfg, "delta_cal", 0.5);
        if (get_u64(cfg, "calibrate", 1) != 0)
            sc = sip::calibrate_phase_config(sc, n_star, delta_cal);
        std::vector<std::size_t> n_grid = parse_size_list(
            get_str(cfg, "n_grid",
                    "100,150,200,250,300,350,400,450,500,550,600,650,700,750,800,850,900,950,1000"),
            "n_grid");
        std::size_t eval_n = static_cast<std::size_t>(get_u64(cfg, "eval_n", 6000));
        sip::ExperimentSeries s = sip::run_phase_experiment(sc, n_grid, seeds, eval_n);
        sip::write_series_csv(out_path("phase.csv"), s);
        double knee = sip::max_curvature_knee(s);
        std::printf("phase: calibrated gap %s, knee at n = %s\n",
                    sip::format_double(sip::population_gap(sc)).c_str(),
                    sip::format_double(knee).c_str());
        return 0;
    }

    if (name == "clip") {
        sip::SyntheticConfig sc = parse_synthetic(cfg);
        std::vector<double> q_grid;
        if (cfg.count("q_grid")) {
            q_grid = parse_double_list(cfg.at("q_grid"), "q_grid");
        } else {
            q_grid = uniform_grid(get_double(cfg, "q_min", 0.40), get_double(cfg, "q_max", 0.995),
                                  static_cast<std::size_t>(get_u64(cfg, "q_count", 24)));
        }
        std::size_t n = static_cast<std::size_t>(get_u64(cfg, "n", 500));
        sip::ClippingSweep sweep = sip::run_clipping_sweep(sc, q_grid, n, seeds);
        sip::write_series_csv(out_path("clip_ratio.csv"), sweep.ratio);
        sip::write_series_csv(out_path("clip_sine.csv"), sweep.sine);
        sip::SweetSpot spot = sip::sweet_spot(sweep.ratio);
        std::printf("clip: sweet spot q = %s (mean ratio %s)\n",
                    sip::format_double(spot.q_star).c_str(),
                    sip::format_double(spot.value).c_str());
        return 0;
    }

    if (name == "scaling") {
        sip::SyntheticConfig sc = parse_synthetic(cfg);
        std::vector<std::size_t> n_grid =
            parse_size_list(get_str(cfg, "n_grid", "100,200,400,800,1600,3200"), "n_grid");
        sip::ScalingResult r = sip::run_scaling_experiment(sc, n_grid, seeds);
        sip::write_series_csv(out_path("scaling.csv"), r.series);
        std::printf("scaling: slope %s\n", sip::format_double(r.slope).c_str());
        return 0;
    }

    if (name == "margin") {
        sip::SyntheticConfig sc = parse_synthetic(cfg);
        std::vector<double> t_grid;
        if (cfg.count("t_grid")) {
            t_grid = parse_double_list(cfg.at("t_grid"), "t_grid");
        } else {
            t_grid = uniform_grid(0.0, get_double(cfg, "t_max", 2.0),
                                  static_cast<std::size_t>(get_u64(cfg, "t_count", 41)));
        }
        sip::ExperimentSeries s = sip::margin_tail_curve(sc, t_grid);
        sip::write_series_csv(out_path("margin.csv"), s);
        std::printf("margin: %zu grid points written\n", s.x.size());
        return 0;
    }

    fail(ErrorCode::InvalidConfig, "unknown experiment '" + name +
                                       "' (expected subspace, phase, clip, scaling or margin)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral identifiability diagnostics for feature matrices"};
    app.require_subcommand(1);

    // diagnose
    std::string input, format, clip_mode = "norm", tag, json_out;
    sip::DiagnoseOptions opt;
    double clip_q = -1.0;
    CLI::App* diag = app.add_subcommand("diagnose", "Run the diagnostic pipeline on one matrix");
    diag->add_option("--input", input, "feature matrix (.csv or .f32bin)")->required();
    diag->add_option("--format", format, "input format override: csv | f32bin")
        ->check(CLI::IsMember({"csv", "f32bin"}));
    diag->add_option("--k", opt.k, "signal subspace dimension")->capture_default_str();
    diag->add_option("--ridge", opt.ridge, "ridge added to the Fisher estimate")
        ->capture_default_str();
    diag->add_option("--delta-conf,--delta", opt.delta,
                     "confidence level for the concentration envelope")
        ->capture_default_str();
    diag->add_option("--clip-quantile,--clip-q", clip_q, "clip row norms at this quantile");
    diag->add_option("--clip-mode", clip_mode, "norm | winsor")
        ->check(CLI::IsMember({"norm", "winsor"}))
        ->capture_default_str();
    diag->add_flag("--auto-clip", opt.auto_clip, "sweep for a clip quantile when tails are heavy");
    diag->add_option("--seed", opt.seed, "base seed for split-half draws")->capture_default_str();
    diag->add_option("--splits", opt.n_splits, "split-half repetitions")->capture_default_str();
    diag->add_option("--tag", tag, "layer tag recorded in the report (default: input basename)");
    diag->add_option("--report,--json", json_out, "also write the report JSON to this file");

    // experiment
    std::string exp_name, exp_config, exp_out = ".";
    CLI::App* exp = app.add_subcommand("experiment", "Run a synthetic experiment");
    exp->add_option("--name", exp_name, "subspace | phase | clip | scaling | margin")->required();
    exp->add_option("--config", exp_config, "key=value config file");
    exp->add_option("--series-dir,--out-dir", exp_out, "directory for series CSVs")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);  // prints help or the parse error
        return rc == 0 ? 0 : 2;
    }

    try {
        if (diag->parsed()) {
            sip::FeatureMatrix f = format == "csv"      ? sip::read_csv(input)
                                   : format == "f32bin" ? sip::read_f32bin(input)
                                                        : sip::read_features(input);
            if (clip_q >= 0.0) opt.clip_q = clip_q;
            opt.clip_mode = clip_mode == "winsor" ? sip::ClipMode::Winsorize : sip::ClipMode::NormClip;
            opt.layer_tag = tag.empty() ? basename_of(input) : tag;
            sip::SipReport rep = sip::diagnose(f, opt);
            std::string json = sip::to_json(rep);
            std::printf("%s\n", json.c_str());
            if (!json_out.empty()) {
                std::ofstream out(json_out);
                if (!out) fail(ErrorCode::IoError, "cannot open " + json_out + " for writing");
                out << json << "\n";
            }
            return rep.pass ? 0 : 1;
        }
        return run_experiment(exp_name, exp_config, exp_out);
    } catch (const sip::Error& e) {
        std::fprintf(stderr, "error [%s]: %s\n", sip::error_code_name(e.code()), e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
