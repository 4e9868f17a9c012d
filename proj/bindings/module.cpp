#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "sip/io.hpp"
#include "sip/pipeline.hpp"
#include "sip/synthetic.hpp"

namespace py = pybind11;

namespace {

using DArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

sip::Matrix mat_from(const DArray& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
    sip::Matrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
    auto r = a.unchecked<2>();
    for (py::ssize_t i = 0; i < a.shape(0); ++i)
        for (py::ssize_t j = 0; j < a.shape(1); ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = r(i, j);
    return m;
}

py::array_t<double> array_from(const sip::Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    auto w = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            w(static_cast<py::ssize_t>(i), static_cast<py::ssize_t>(j)) = m(i, j);
    return out;
}

py::array_t<double> array_from(const sip::Vector& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    auto w = out.mutable_unchecked<1>();
    for (std::size_t i = 0; i < v.size(); ++i) w(static_cast<py::ssize_t>(i)) = v[i];
    return out;
}

sip::FeatureMatrix features_from(const DArray& rows, const std::optional<std::vector<int>>& labels) {
    sip::FeatureMatrix f;
    f.rows = mat_from(rows);
    if (labels) f.labels = *labels;
    f.validate();
    return f;
}

py::object opt_num(std::optional<double> v) {
    if (!v) return py::none();
    return py::float_(*v);
}

py::dict report_dict(const sip::SipReport& r) {
    py::dict d;
    d["layer_tag"] = r.layer_tag;
    d["d"] = r.d;
    d["k"] = r.k;
    d["n"] = r.n;
    d["q_star"] = opt_num(r.q_star);
    d["ridge"] = r.ridge;
    d["gap_hat"] = r.gap_hat;
    d["delta_hat"] = r.delta_hat;
    d["ratio"] = r.ratio;
    d["verdict"] = r.pass ? "pass" : "fail";
    if (r.kappa) {
        py::dict k;
        k["kappa"] = r.kappa->kappa;
        k["c"] = r.kappa->c;
        k["r_squared"] = r.kappa->r_squared;
        d["kappa_hat"] = k;
    } else {
        d["kappa_hat"] = py::none();
    }
    if (r.tail) {
        py::dict t;
        t["kurtosis"] = r.tail->kurtosis;
        t["hill_index"] = r.tail->hill_index;
        t["heavy"] = r.tail->heavy;
        d["tail"] = t;
    } else {
        d["tail"] = py::none();
    }
    if (r.complexity) {
        py::dict c;
        c["n_var"] = r.complexity->n_var;
        c["n_gap"] = r.complexity->n_gap;
        c["n_min"] = r.complexity->n_min;
        c["empirical_n_min"] = r.complexity->empirical_n_min
                                   ? py::object(py::int_(*r.complexity->empirical_n_min))
                                   : py::object(py::none());
        d["n_min"] = c;
    } else {
        d["n_min"] = py::none();
    }
    d["bernstein_t"] = opt_num(r.bernstein_t);
    if (r.risk) {
        py::dict b;
        b["raw"] = r.risk->raw;
        b["clamped"] = r.risk->clamped;
        d["risk_bound"] = b;
    } else {
        d["risk_bound"] = py::none();
    }
    d["probe_accuracy"] = opt_num(r.probe_accuracy);
    d["warnings"] = r.warnings;
    return d;
}

sip::DiagnoseOptions make_options(std::size_t k, double ridge, double delta,
                                  std::optional<double> clip_q, bool auto_clip,
                                  std::uint64_t seed, std::size_t splits,
                                  const std::string& tag) {
    sip::DiagnoseOptions opt;
    opt.k = k;
    opt.ridge = ridge;
    opt.delta = delta;
    opt.clip_q = clip_q;
    opt.auto_clip = auto_clip;
    opt.seed = seed;
    opt.n_splits = splits;
    opt.layer_tag = tag;
    return opt;
}

sip::SyntheticConfig make_config(const std::string& family, std::size_t d, std::size_t k,
                                 double mean_scale, const std::vector<double>& spectrum,
                                 std::uint64_t seed, double nu) {
    sip::SyntheticConfig cfg;
    if (family == "gaussian") {
        cfg.family = sip::Family::Gaussian;
    } else if (family == "student_t") {
        cfg.family = sip::Family::StudentT;
        cfg.nu = nu;
    } else {
        throw py::value_error("family must be 'gaussian' or 'student_t'");
    }
    cfg.d = d;
    cfg.k = k;
    cfg.mean_scale = mean_scale;
    cfg.scale_spectrum = spectrum;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

}  // namespace

PYBIND11_MODULE(sipdiag, m) {
    m.doc() = "Spectral identifiability diagnostics: Fisher estimation, eigengap "
              "stability checks and risk bounds for linear probes.";

    py::register_exception<sip::Error>(m, "SipError");

    m.def(
        "diagnose",
        [](const DArray& rows, std::optional<std::vector<int>> labels, std::size_t k,
           double ridge, double delta, std::optional<double> clip_q, bool auto_clip,
           std::uint64_t seed, std::size_t splits, const std::string& tag) {
            sip::FeatureMatrix f = features_from(rows, labels);
            return report_dict(
                sip::diagnose(f, make_options(k, ridge, delta, clip_q, auto_clip, seed, splits, tag)));
        },
        py::arg("features"), py::arg("labels") = py::none(), py::arg("k") = 1,
        py::arg("ridge") = 0.0, py::arg("delta") = 0.1, py::arg("clip_q") = py::none(),
        py::arg("auto_clip") = false, py::arg("seed") = 0, py::arg("splits") = 8,
        py::arg("tag") = "",
        "Full diagnostic pass; returns the report as a dict.");

    m.def(
        "diagnose_json",
        [](const DArray& rows, std::optional<std::vector<int>> labels, std::size_t k,
           double ridge, double delta, std::optional<double> clip_q, bool auto_clip,
           std::uint64_t seed, std::size_t splits, const std::string& tag) {
            sip::FeatureMatrix f = features_from(rows, labels);
            return sip::to_json(
                sip::diagnose(f, make_options(k, ridge, delta, clip_q, auto_clip, seed, splits, tag)));
        },
        py::arg("features"), py::arg("labels") = py::none(), py::arg("k") = 1,
        py::arg("ridge") = 0.0, py::arg("delta") = 0.1, py::arg("clip_q") = py::none(),
        py::arg("auto_clip") = false, py::arg("seed") = 0, py::arg("splits") = 8,
        py::arg("tag") = "",
        "Same as diagnose but returns the deterministic JSON string.");

    m.def(
        "empirical_fisher",
        [](const DArray& rows) {
            sip::FeatureMatrix f = features_from(rows, std::nullopt);
            return array_from(sip::empirical_fisher(f).gamma);
        },
        py::arg("features"), "Uncentered second-moment estimate (1/n) sum h h^T.");

    m.def(
        "eigh",
        [](const DArray& mat) {
            sip::SpectralDecomposition dec = sip::eigh(mat_from(mat));
            return py::make_tuple(array_from(dec.eigenvalues), array_from(dec.vectors));
        },
        py::arg("matrix"),
        "Symmetric eigendecomposition; eigenvalues descending, eigenvectors as columns.");

    m.def(
        "operator_norm", [](const DArray& mat) { return sip::operator_norm(mat_from(mat)); },
        py::arg("matrix"), "Largest singular value.");

    m.def(
        "eigengap",
        [](const DArray& mat, std::size_t k) { return sip::eigengap(sip::eigh(mat_from(mat)), k); },
        py::arg("matrix"), py::arg("k") = 1, "lambda_k - lambda_{k+1} of a symmetric matrix.");

    m.def(
        "sin_theta",
        [](const DArray& a, const DArray& b) {
            return array_from(sip::sin_theta(mat_from(a), mat_from(b)).sines);
        },
        py::arg("basis_a"), py::arg("basis_b"),
        "Principal-angle sines between two orthonormal bases, descending.");

    m.def(
        "split_half_delta",
        [](const DArray& rows, std::optional<std::vector<int>> labels, std::uint64_t seed,
           std::size_t splits) {
            sip::FeatureMatrix f = features_from(rows, labels);
            return sip::split_half_delta(f, seed, splits).value;
        },
        py::arg("features"), py::arg("labels") = py::none(), py::arg("seed") = 0,
        py::arg("splits") = 8, "Split-half operator-deviation proxy.");

    m.def(
        "clip_features",
        [](const DArray& rows, double q) {
            sip::FeatureMatrix f = features_from(rows, std::nullopt);
            sip::ClipResult c = sip::clip_features(f, q, sip::ClipMode::NormClip);
            return py::make_tuple(array_from(c.features.rows), c.radius);
        },
        py::arg("features"), py::arg("q"),
        "Rescale rows whose norm exceeds the q-quantile; returns (rows, radius).");

    m.def(
        "bernstein_bound",
        [](double v, double r, std::size_t d, double delta, std::uint64_t n) {
            sip::ConcentrationParams p;
            p.v = v;
            p.r = r;
            p.d = d;
            p.delta_conf = delta;
            return sip::bernstein_bound(p, n);
        },
        py::arg("v"), py::arg("r"), py::arg("d"), py::arg("delta"), py::arg("n"),
        "Matrix concentration envelope sqrt(2 v L / n) + 2 r L / (3 n), L = log(2d/delta).");

    m.def(
        "sample_synthetic",
        [](const std::string& family, std::size_t d, std::size_t k, double mean_scale,
           const std::vector<double>& spectrum, std::uint64_t seed, std::size_t n, double nu) {
            sip::SyntheticConfig cfg = make_config(family, d, k, mean_scale, spectrum, seed, nu);
            sip::FeatureMatrix f = sip::sample(cfg, n, seed);
            return py::make_tuple(array_from(f.rows), *f.labels);
        },
        py::arg("family"), py::arg("d"), py::arg("k"), py::arg("mean_scale"), py::arg("spectrum"),
        py::arg("seed"), py::arg("n"), py::arg("nu") = 0.0,
        "Draw n rows of the two-class synthetic model; returns (features, labels).");

    m.def(
        "population_fisher",
        [](const std::string& family, std::size_t d, std::size_t k, double mean_scale,
           const std::vector<double>& spectrum, double nu) {
            return array_from(
                sip::population_fisher(make_config(family, d, k, mean_scale, spectrum, 0, nu)));
        },
        py::arg("family"), py::arg("d"), py::arg("k"), py::arg("mean_scale"), py::arg("spectrum"),
        py::arg("nu") = 0.0, "Population second-moment operator of the synthetic model.");

    m.def(
        "read_features",
        [](const std::string& path) {
            sip::FeatureMatrix f = sip::read_features(path);
            py::object labels = f.labels ? py::cast(*f.labels) : py::object(py::none());
            return py::make_tuple(array_from(f.rows), labels);
        },
        py::arg("path"), "Load a .csv or .f32bin feature matrix; returns (features, labels).");

    m.def(
        "write_features",
        [](const std::string& path, const DArray& rows, std::optional<std::vector<int>> labels) {
            sip::FeatureMatrix f = features_from(rows, labels);
            if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0)
                sip::write_csv(path, f);
            else
                sip::write_f32bin(path, f);
        },
        py::arg("path"), py::arg("features"), py::arg("labels") = py::none(),
        "Write a feature matrix as .csv or .f32bin (by extension).");
}
