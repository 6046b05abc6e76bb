#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "bound.hpp"
#include "csv.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "norms.hpp"
#include "outer_set.hpp"
#include "rng.hpp"
#include "series.hpp"
#include "sets.hpp"
#include "svg.hpp"
#include "tubempc.hpp"
#include "version.hpp"

namespace mrpi {

/// Resolved configuration of one experiment run. Defaults reproduce the
/// benchmark protocol; every run echoes the final values into a manifest so
/// the output directory is self-describing and byte-reproducible.
struct RunConfig {
    std::uint64_t seed = 1;
    std::vector<std::size_t> dims = {10, 15, 20};  // curve dimensions (exp3)
    int n_max = 0;                                 // 0 = per-subcommand default
    int dir_count = 2000;
    int k_ref = 200;
    double epsilon = 1e-3;
    TailExponent convention = TailExponent::kSeriesLength;
    std::string norm_choice = "lyapunov";  // euclidean | diag[:count] | lyapunov
    std::string output_dir = "out";
};

// ---------------------------------------------------------------------------
// Config-file support: flat `key = value` lines, '#' comments.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace detail

inline TailExponent parse_convention(const std::string& value) {
    if (value == "N") return TailExponent::kSeriesLength;
    if (value == "N+1") return TailExponent::kShifted;
    throw InvalidArgument("convention must be N or N+1, got '" + value + "'");
}

inline void apply_config_entry(RunConfig& cfg, const std::string& key,
                               const std::string& value) {
    try {
        if (key == "seed") {
            cfg.seed = std::stoull(value);
        } else if (key == "dims") {
            std::vector<std::size_t> dims;
            for (const std::string& part : detail::split(value, ',')) {
                const std::string t = detail::trim(part);
                if (t.empty()) continue;
                dims.push_back(std::stoull(t));
            }
            if (dims.empty()) throw InvalidArgument("dims must list at least one dimension");
            cfg.dims = std::move(dims);
        } else if (key == "n_max") {
            cfg.n_max = std::stoi(value);
        } else if (key == "dir_count") {
            cfg.dir_count = std::stoi(value);
        } else if (key == "k_ref") {
            cfg.k_ref = std::stoi(value);
        } else if (key == "epsilon") {
            cfg.epsilon = std::stod(value);
        } else if (key == "convention") {
            cfg.convention = parse_convention(value);
        } else if (key == "norm") {
            cfg.norm_choice = value;
        } else if (key == "out") {
            cfg.output_dir = value;
        } else {
            throw InvalidArgument("unknown config key '" + key + "'");
        }
    } catch (const std::invalid_argument&) {
        throw InvalidArgument("config value for '" + key + "' does not parse: '" + value + "'");
    } catch (const std::out_of_range&) {
        throw InvalidArgument("config value for '" + key + "' is out of range: '" + value + "'");
    }
}

/// Parse a flat key = value config text on top of `base`. Later lines win;
/// command-line flags are applied afterwards by the caller and win over both.
inline RunConfig parse_config_text(const std::string& text, RunConfig base) {
    std::size_t line_no = 0;
    for (const std::string& raw : detail::split(text, '\n')) {
        ++line_no;
        std::string line = detail::trim(raw);
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = detail::trim(line.substr(0, hash));
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidArgument("config line " + std::to_string(line_no) +
                                  " is not 'key = value'");
        apply_config_entry(base, detail::trim(line.substr(0, eq)),
                           detail::trim(line.substr(eq + 1)));
    }
    return base;
}

/// Resolve the norm-shaping choice against a concrete matrix. The rng feeds
/// the diagonal candidate draw (consumed deterministically).
inline ShapedNorm resolve_norm(const std::string& choice, const Matrix& a, Rng& rng) {
    if (choice == "euclidean") return shape_euclidean(a);
    if (choice == "lyapunov") return shape_lyapunov(a);
    if (choice == "diag" || choice.rfind("diag:", 0) == 0) {
        std::size_t count = 200;
        if (choice.size() > 5) {
            try {
                count = std::stoull(choice.substr(5));
            } catch (...) {
                throw InvalidArgument("norm 'diag:<count>' needs a numeric count, got '" +
                                      choice + "'");
            }
        }
        return shape_diagonal(a, diagonal_candidates(a.rows(), rng, count));
    }
    throw InvalidArgument("norm must be euclidean, diag[:count], or lyapunov, got '" + choice +
                          "'");
}

inline std::string dims_to_string(const std::vector<std::size_t>& dims) {
    std::string s;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(dims[i]);
    }
    return s;
}

inline std::string manifest_for(const std::string& subcommand, const RunConfig& cfg,
                                int n_max_resolved) {
    return manifest_text({{"version", kVersionString},
                          {"subcommand", subcommand},
                          {"seed", std::to_string(cfg.seed)},
                          {"dims", dims_to_string(cfg.dims)},
                          {"n_max", std::to_string(n_max_resolved)},
                          {"dir_count", std::to_string(cfg.dir_count)},
                          {"k_ref", std::to_string(cfg.k_ref)},
                          {"epsilon", format_double(cfg.epsilon)},
                          {"convention", tail_exponent_name(cfg.convention)},
                          {"norm", cfg.norm_choice},
                          {"output_dir", cfg.output_dir}});
}

// ---------------------------------------------------------------------------
// Shared curve pipeline
// ---------------------------------------------------------------------------

/// One system / one norm decay curve with its certificates and checks.
struct CurveRun {
    ShapedNorm shaped;
    RadiusBound radius;
    std::vector<ErrorPoint> curve;
    std::vector<double> bounds;
    bool sound = true;
};

/// Numeric curve against the closed-form bound. `dual_dirs` must already be
/// normalized to unit dual norm of the shaped norm, so sampled gaps are
/// distances in that norm. Soundness: every numeric row at or below its bound
/// up to relative slack (the numeric side measures distance to E_{k_ref}
/// inside E_infinity, so it can only undershoot the true distance).
inline CurveRun run_error_curve(const Matrix& a, const Box& w, ShapedNorm shaped, int n_max,
                                int k_ref, const std::vector<Vec>& dual_dirs,
                                TailExponent convention, double slack = 1e-9) {
    require_contraction(shaped.gamma, "run_error_curve");
    const RadiusBound radius = disturbance_radius(shaped.norm, w);
    CurveRun run{std::move(shaped), radius, {}, {}, true};
    const SeriesBlocks blocks = compute_blocks(a, Zonotope::from_box(w), k_ref);
    run.curve = error_curve(blocks, n_max, k_ref, dual_dirs);
    run.bounds.reserve(run.curve.size());
    for (const ErrorPoint& pt : run.curve) {
        const double bound = tail_bound(run.radius.value, run.shaped.gamma, pt.n, convention);
        run.bounds.push_back(bound);
        if (pt.d_num > bound + slack * std::max(1.0, bound)) run.sound = false;
    }
    return run;
}

/// Least-squares slope of ln d_num against n (rows with d_num > 0 only).
inline double fit_log_slope(const std::vector<ErrorPoint>& curve) {
    double sn = 0.0, sd = 0.0, snn = 0.0, snd = 0.0;
    std::size_t m = 0;
    for (const ErrorPoint& pt : curve) {
        if (!(pt.d_num > 0.0)) continue;
        const double x = static_cast<double>(pt.n);
        const double y = std::log(pt.d_num);
        sn += x;
        sd += y;
        snn += x * x;
        snd += x * y;
        ++m;
    }
    if (m < 2) throw DegenerateCurve("fit_log_slope: fewer than two positive rows");
    const double denom = snn - sn * sn / static_cast<double>(m);
    if (denom <= 0.0) throw DegenerateCurve("fit_log_slope: degenerate abscissa");
    return (snd - sn * sd / static_cast<double>(m)) / denom;
}

// ---------------------------------------------------------------------------
// Experiment 1: six-dimensional decay curve against the closed-form bound
// ---------------------------------------------------------------------------

struct Exp1Result {
    bool sound = false;
    double gamma = 0.0;
    double r_w = 0.0;
    double slope = 0.0;
    double slope_rel_err = 0.0;
    std::vector<std::string> files;
};

/// Seeded 6-D normal Schur system (every singular value 0.9) with the box
/// disturbance [-0.1, 0.1]^6: numeric decay curve vs the certificate bound,
/// written as CSV + log-scale SVG + certificate. The generator is normal so
/// the contraction factor is achieved and the fitted decay slope is
/// comparable to ln(gamma).
inline Exp1Result run_exp1(const RunConfig& cfg) {
    const int n_max = cfg.n_max > 0 ? cfg.n_max : 30;
    const std::size_t dim = 6;
    if (cfg.k_ref < n_max) throw InvalidArgument("run_exp1: k_ref must be >= n_max");

    Rng rng(cfg.seed);
    const Matrix a = random_normal_schur_matrix(dim, 0.9, rng);
    const Box w = Box::centered(Vec(dim, 0.1));
    ShapedNorm shaped = resolve_norm(cfg.norm_choice, a, rng);
    const std::vector<Vec> base_dirs = sample_unit_directions(dim, cfg.dir_count, rng);
    const std::vector<Vec> dirs = normalize_dual(shaped.norm, base_dirs);

    CurveRun run = run_error_curve(a, w, std::move(shaped), n_max, cfg.k_ref, dirs,
                                   cfg.convention);

    Exp1Result res;
    res.sound = run.sound;
    res.gamma = run.shaped.gamma;
    res.r_w = run.radius.value;
    res.slope = fit_log_slope(run.curve);
    const double ref_slope = std::log(run.shaped.gamma);
    res.slope_rel_err = std::abs(res.slope - ref_slope) / std::abs(ref_slope);

    const std::filesystem::path dir(cfg.output_dir);
    write_text_file(dir / "manifest.txt", manifest_for("exp1", cfg, n_max));
    write_text_file(dir / "exp1_curve.csv",
                    error_curve_csv(run.curve, run.bounds, run.shaped.gamma, run.radius.value,
                                    cfg.convention, cfg.seed));
    PlotSeries numeric{"sampled distance", {}, ""};
    PlotSeries bound{"closed-form bound", {}, ""};
    for (std::size_t i = 0; i < run.curve.size(); ++i) {
        numeric.points.push_back({static_cast<double>(run.curve[i].n), run.curve[i].d_num});
        bound.points.push_back({static_cast<double>(run.curve[i].n), run.bounds[i]});
    }
    write_text_file(dir / "exp1_decay.svg",
                    render_line_plot("Truncation error decay (6-D)", "truncation length N",
                                     "distance to reference set", {numeric, bound}, true));
    write_text_file(dir / "exp1_certificate.txt",
                    certificate_text(n_max, run.shaped.gamma, run.radius.value,
                                     run.bounds.back(), cfg.norm_choice, !run.radius.exact));
    res.files = {"manifest.txt", "exp1_curve.csv", "exp1_decay.svg", "exp1_certificate.txt"};
    return res;
}

// ---------------------------------------------------------------------------
// Experiment 2: the same system under three norm shapings
// ---------------------------------------------------------------------------

struct Exp2Result {
    bool sound = false;            // all three curves sound
    bool decreasing = false;       // all bound curves strictly decreasing
    bool lyap_within_euclidean = false;  // gamma_ly <= gamma_eu + 1e-8
    double gamma_euclidean = 0.0;
    double gamma_diagonal = 0.0;
    double gamma_lyapunov = 0.0;
    double demo_gamma_euclidean = 0.0;
    double demo_gamma_diagonal = 0.0;
    double demo_bound_ratio_n5 = 0.0;  // euclidean bound / shaped bound at N=5
    std::vector<std::string> files;
};

/// Re-runs the exp1 system (same seed, same matrix) under Euclidean, best
/// diagonal, and Lyapunov shapings and writes one decay CSV per norm plus an
/// overlay SVG. Also evaluates the fixed shear demo: a nilpotent block
/// [[0, 0.9], [0, 0]] padded to 6-D, where the diagonal weight
/// diag(1, 81, 1, ...) drops the contraction factor from 0.9 to 0.1 and the
/// N=5 bound by orders of magnitude.
inline Exp2Result run_exp2(const RunConfig& cfg) {
    const int n_max = cfg.n_max > 0 ? cfg.n_max : 30;
    const std::size_t dim = 6;
    if (cfg.k_ref < n_max) throw InvalidArgument("run_exp2: k_ref must be >= n_max");

    Rng rng(cfg.seed);
    const Matrix a = random_normal_schur_matrix(dim, 0.9, rng);
    const Box w = Box::centered(Vec(dim, 0.1));

    ShapedNorm eu = shape_euclidean(a);
    ShapedNorm di = shape_diagonal(a, diagonal_candidates(dim, rng, 200));
    ShapedNorm ly = shape_lyapunov(a);
    const std::vector<Vec> base_dirs = sample_unit_directions(dim, cfg.dir_count, rng);

    Exp2Result res;
    res.gamma_euclidean = eu.gamma;
    res.gamma_diagonal = di.gamma;
    res.gamma_lyapunov = ly.gamma;
    res.lyap_within_euclidean = ly.gamma <= eu.gamma + 1e-8;

    const std::filesystem::path dir(cfg.output_dir);
    write_text_file(dir / "manifest.txt", manifest_for("exp2", cfg, n_max));

    struct Entry {
        const char* name;
        ShapedNorm shaped;
    };
    std::vector<Entry> entries;
    entries.push_back({"euclidean", std::move(eu)});
    entries.push_back({"diagonal", std::move(di)});
    entries.push_back({"lyapunov", std::move(ly)});

    res.sound = true;
    res.decreasing = true;
    std::vector<PlotSeries> bound_series;
    for (Entry& e : entries) {
        const std::vector<Vec> dirs = normalize_dual(e.shaped.norm, base_dirs);
        CurveRun run = run_error_curve(a, w, std::move(e.shaped), n_max, cfg.k_ref, dirs,
                                       cfg.convention);
        if (!run.sound) res.sound = false;
        for (std::size_t i = 1; i < run.bounds.size(); ++i)
            if (!(run.bounds[i] < run.bounds[i - 1])) res.decreasing = false;
        write_text_file(dir / ("exp2_" + std::string(e.name) + ".csv"),
                        error_curve_csv(run.curve, run.bounds, run.shaped.gamma,
                                        run.radius.value, cfg.convention, cfg.seed));
        PlotSeries s;
        s.label = std::string(e.name) + " (gamma=" + format_double(run.shaped.gamma) +
                  ", rW=" + format_double(run.radius.value) + ")";
        for (std::size_t i = 0; i < run.bounds.size(); ++i)
            s.points.push_back({static_cast<double>(run.curve[i].n), run.bounds[i]});
        bound_series.push_back(std::move(s));
    }
    write_text_file(dir / "exp2_bounds.svg",
                    render_line_plot("Certificate bound under norm shaping",
                                     "truncation length N", "tail bound", bound_series, true));

    // Fixed shear demo, padded to the experiment dimension.
    Matrix demo(dim, dim);
    demo(0, 1) = 0.9;
    Vec weights(dim, 1.0);
    weights[1] = 81.0;
    QuadNorm demo_norm = QuadNorm::diagonal(weights);
    const ShapedNorm demo_eu = shape_euclidean(demo);
    const double demo_gamma_diag = demo_norm.induced_norm(demo);
    res.demo_gamma_euclidean = demo_eu.gamma;
    res.demo_gamma_diagonal = demo_gamma_diag;
    const double r_eu = disturbance_radius(demo_eu.norm, w).value;
    const double r_di = disturbance_radius(demo_norm, w).value;
    res.demo_bound_ratio_n5 = tail_bound(r_eu, demo_eu.gamma, 5, cfg.convention) /
                              tail_bound(r_di, demo_gamma_diag, 5, cfg.convention);

    res.files = {"manifest.txt",       "exp2_euclidean.csv", "exp2_diagonal.csv",
                 "exp2_lyapunov.csv",  "exp2_bounds.svg"};
    return res;
}

// ---------------------------------------------------------------------------
// Experiment 3: decay across state dimensions, with runtimes
// ---------------------------------------------------------------------------

struct Exp3DimResult {
    std::size_t dim = 0;
    bool sound = false;
    double gamma = 0.0;
    double r_w = 0.0;
    bool radius_exact = true;
    double millis = 0.0;
};

struct Exp3Result {
    bool sound = false;
    std::vector<Exp3DimResult> per_dim;
    std::vector<std::string> files;
};

/// Decay curves for seeded dense Schur systems (spectral radius 0.8) at each
/// configured dimension, disturbance box [-0.1, 0.1]^dim, with one CSV per
/// dimension, an overlay SVG, and a wall-clock report. The radius falls back
/// to its conservative form past 16 dimensions and is flagged in the result.
inline Exp3Result run_exp3(const RunConfig& cfg) {
    const int n_max = cfg.n_max > 0 ? cfg.n_max : 20;
    if (cfg.k_ref < n_max) throw InvalidArgument("run_exp3: k_ref must be >= n_max");
    if (cfg.dims.empty()) throw InvalidArgument("run_exp3: needs at least one dimension");

    const std::filesystem::path dir(cfg.output_dir);
    write_text_file(dir / "manifest.txt", manifest_for("exp3", cfg, n_max));

    Exp3Result res;
    res.sound = true;
    Rng rng(cfg.seed);
    std::vector<PlotSeries> series;
    std::string runtime_report;
    double total_ms = 0.0;
    for (std::size_t d : cfg.dims) {
        const auto t0 = std::chrono::steady_clock::now();
        const Matrix a = random_schur_matrix(d, 0.8, rng);
        const Box w = Box::centered(Vec(d, 0.1));
        ShapedNorm shaped = resolve_norm(cfg.norm_choice, a, rng);
        const std::vector<Vec> dirs =
            normalize_dual(shaped.norm, sample_unit_directions(d, cfg.dir_count, rng));
        CurveRun run = run_error_curve(a, w, std::move(shaped), n_max, cfg.k_ref, dirs,
                                       cfg.convention);
        const auto t1 = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
        total_ms += ms;

        if (!run.sound) res.sound = false;
        res.per_dim.push_back({d, run.sound, run.shaped.gamma, run.radius.value,
                               run.radius.exact, ms});

        const std::string csv_name = "exp3_dim" + std::to_string(d) + ".csv";
        write_text_file(dir / csv_name,
                        error_curve_csv(run.curve, run.bounds, run.shaped.gamma,
                                        run.radius.value, cfg.convention, cfg.seed));
        res.files.push_back(csv_name);

        PlotSeries numeric{"dim " + std::to_string(d) + " sampled", {}, ""};
        PlotSeries bound{"dim " + std::to_string(d) + " bound", {}, ""};
        for (std::size_t i = 0; i < run.curve.size(); ++i) {
            numeric.points.push_back({static_cast<double>(run.curve[i].n), run.curve[i].d_num});
            bound.points.push_back({static_cast<double>(run.curve[i].n), run.bounds[i]});
        }
        series.push_back(std::move(numeric));
        series.push_back(std::move(bound));

        runtime_report += "dim " + std::to_string(d) + ": " + format_double(ms) + " ms\n";
    }
    runtime_report += "total: " + format_double(total_ms) + " ms\n";
    write_text_file(dir / "exp3_decay.svg",
                    render_line_plot("Truncation error decay across dimensions",
                                     "truncation length N", "distance / bound", series, true));
    write_text_file(dir / "exp3_runtime.txt", runtime_report);
    res.files.insert(res.files.begin(), "manifest.txt");
    res.files.push_back("exp3_decay.svg");
    res.files.push_back("exp3_runtime.txt");
    return res;
}

// ---------------------------------------------------------------------------
// Experiment 4: tube MPC feasible-set comparison and rollouts
// ---------------------------------------------------------------------------

struct Exp4Result {
    bool dominance = false;        // certified x_tight >= baseline per axis
    bool volume_strict = false;    // certified volume strictly larger
    bool rpi_ok = false;           // certified cross-section passes invariance
    bool zero_violations = false;  // across both designs' rollouts
    bool contained = false;        // error in Z at every logged step
    int truncation = 0;
    double gamma = 0.0;
    double r_w = 0.0;
    double baseline_volume = 0.0;
    double certified_volume = 0.0;
    double max_error_norm = 0.0;
    std::vector<std::string> files;
};

/// Full tube pipeline on the double integrator: X = [-2,2]^2, U = [-1,1],
/// W = [-0.05,0.05]^2, LQR gain with Q = I, R = 1, truncation length from the
/// epsilon certificate. Emits the feasible-set comparison (CSV + SVG), both
/// trajectory logs (CSV), the rollout overlay SVG, and the certificate.
inline Exp4Result run_exp4(const RunConfig& cfg, int rollouts = 100, int steps = 50) {
    Plant plant(Matrix{{1.0, 1.0}, {0.0, 1.0}}, Matrix{{0.5}, {1.0}});
    const Box x_box = Box::centered({2.0, 2.0});
    const Box u_box = Box::centered({1.0});
    const Box w_box = Box::centered({0.05, 0.05});

    Rng rng(cfg.seed);
    const Matrix k_gain = dlqr_gain(plant, Matrix::identity(2), Matrix::identity(1));
    const Matrix a_cl = plant.a + plant.b * k_gain;
    ShapedNorm shaped = resolve_norm(cfg.norm_choice, a_cl, rng);

    Exp4Result res;
    res.gamma = shaped.gamma;
    res.r_w = disturbance_radius(shaped.norm, w_box).value;
    res.truncation = truncation_index(cfg.epsilon, shaped.gamma, res.r_w, cfg.convention);

    const TubeDesign baseline = make_tube_design(plant, k_gain, shaped, x_box, u_box, w_box,
                                                 TubeMethod::kBaseline, 0, cfg.convention);
    const TubeDesign certified = make_tube_design(plant, k_gain, shaped, x_box, u_box, w_box,
                                                  TubeMethod::kCertified, res.truncation,
                                                  cfg.convention);

    res.dominance = true;
    for (std::size_t j = 0; j < 2; ++j)
        if (certified.x_tight.halfwidth[j] < baseline.x_tight.halfwidth[j] - 1e-9)
            res.dominance = false;
    if (certified.u_tight.halfwidth[0] < baseline.u_tight.halfwidth[0] - 1e-9)
        res.dominance = false;
    res.baseline_volume = baseline.x_tight.volume();
    res.certified_volume = certified.x_tight.volume();
    res.volume_strict = res.certified_volume > res.baseline_volume;

    const std::vector<Vec> dirs = sample_unit_directions(2, cfg.dir_count, rng);
    res.rpi_ok = is_invariant_sampled(certified.cross_section, certified.a_cl,
                                      Zonotope::from_box(w_box), dirs);

    const MpcConfig mpc{10, Matrix::identity(2), Matrix::identity(1)};
    const Vec x0{-1.5, 0.5};
    const auto base_logs = simulate_closed_loop(plant, baseline, mpc, x_box, u_box, w_box, x0,
                                                steps, rollouts, cfg.seed, dirs);
    const auto cert_logs = simulate_closed_loop(plant, certified, mpc, x_box, u_box, w_box, x0,
                                                steps, rollouts, cfg.seed + 1000, dirs);
    res.zero_violations = true;
    res.contained = true;
    for (const auto* logs : {&base_logs, &cert_logs})
        for (const TrajectoryLog& log : *logs) {
            if (log.violations != 0) res.zero_violations = false;
            if (!log.error_contained) res.contained = false;
            res.max_error_norm = std::max(res.max_error_norm, log.max_error_norm);
        }

    const std::filesystem::path dir(cfg.output_dir);
    write_text_file(dir / "manifest.txt", manifest_for("exp4", cfg, res.truncation));
    write_text_file(dir / "exp4_comparison.csv",
                    comparison_csv(feasible_set_report({baseline, certified})));
    write_text_file(dir / "exp4_traj_baseline.csv", trajectory_csv(base_logs));
    write_text_file(dir / "exp4_traj_certified.csv", trajectory_csv(cert_logs));
    write_text_file(dir / "exp4_certificate.txt",
                    certificate_text(res.truncation, shaped.gamma, res.r_w,
                                     certified.cross_section.tail_radius, cfg.norm_choice,
                                     !disturbance_radius(shaped.norm, w_box).exact));

    std::vector<PlotRect> rects;
    rects.push_back({"state constraint box", 0.0, 0.0, x_box.halfwidth[0], x_box.halfwidth[1],
                     "#333333", true});
    rects.push_back({"baseline nominal box", baseline.x_tight.center[0],
                     baseline.x_tight.center[1], baseline.x_tight.halfwidth[0],
                     baseline.x_tight.halfwidth[1], "#1f77b4", false});
    rects.push_back({"certified nominal box", certified.x_tight.center[0],
                     certified.x_tight.center[1], certified.x_tight.halfwidth[0],
                     certified.x_tight.halfwidth[1], "#d62728", false});
    write_text_file(dir / "exp4_feasible_sets.svg",
                    render_plane_plot("Nominal feasible boxes", "x1", "x2", rects, {}));

    std::vector<PlotPath> paths;
    const int shown = std::min<int>(12, static_cast<int>(cert_logs.size()));
    for (int r = 0; r < shown; ++r) {
        PlotPath p;
        p.color = "#1f77b4";
        p.opacity = 0.35;
        for (const StepRecord& rec : cert_logs[static_cast<std::size_t>(r)].steps)
            p.points.push_back({rec.x_real[0], rec.x_real[1]});
        paths.push_back(std::move(p));
    }
    if (!cert_logs.empty()) {
        PlotPath nominal;
        nominal.color = "#ff7f0e";
        nominal.opacity = 1.0;
        for (const StepRecord& rec : cert_logs.front().steps)
            nominal.points.push_back({rec.x_nom[0], rec.x_nom[1]});
        paths.push_back(std::move(nominal));
    }
    std::vector<PlotRect> traj_rects;
    traj_rects.push_back({"state constraint box", 0.0, 0.0, x_box.halfwidth[0],
                          x_box.halfwidth[1], "#333333", true});
    traj_rects.push_back({"certified nominal box", certified.x_tight.center[0],
                          certified.x_tight.center[1], certified.x_tight.halfwidth[0],
                          certified.x_tight.halfwidth[1], "#d62728", false});
    write_text_file(dir / "exp4_trajectories.svg",
                    render_plane_plot("Closed-loop rollouts (certified design)", "x1", "x2",
                                     traj_rects, paths));

    res.files = {"manifest.txt",           "exp4_comparison.csv",
                 "exp4_traj_baseline.csv", "exp4_traj_certified.csv",
                 "exp4_certificate.txt",   "exp4_feasible_sets.svg",
                 "exp4_trajectories.svg"};
    return res;
}

}  // namespace mrpi
