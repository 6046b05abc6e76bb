// Command-line front end: truncation certificates and the four benchmark
// experiments, with CSV/SVG emission into a manifest-described directory.
//
// Exit codes: 0 success, 2 usage or configuration error, 3 invariant
// violation detected during a run (treated as build-breaking).

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mrpi/bound.hpp"
#include "mrpi/csv.hpp"
#include "mrpi/experiments.hpp"
#include "mrpi/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInvariant = 3;

struct CliOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::vector<std::size_t>> dims;
    std::optional<int> n_max;
    std::optional<int> dir_count;
    std::optional<int> k_ref;
    std::optional<double> epsilon;
    std::optional<std::string> convention;
    std::optional<std::string> norm;
    std::optional<std::string> out;
};

// Config file first, then flags: a flag always wins over a file entry.
mrpi::RunConfig resolve_config(const CliOptions& opt) {
    mrpi::RunConfig cfg;
    if (!opt.config_path.empty())
        cfg = mrpi::parse_config_text(mrpi::read_text_file(opt.config_path), cfg);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.dims) cfg.dims = *opt.dims;
    if (opt.n_max) cfg.n_max = *opt.n_max;
    if (opt.dir_count) cfg.dir_count = *opt.dir_count;
    if (opt.k_ref) cfg.k_ref = *opt.k_ref;
    if (opt.epsilon) cfg.epsilon = *opt.epsilon;
    if (opt.convention) cfg.convention = mrpi::parse_convention(*opt.convention);
    if (opt.norm) cfg.norm_choice = *opt.norm;
    if (opt.out) cfg.output_dir = *opt.out;
    if (cfg.dir_count < 1) throw mrpi::InvalidArgument("dir_count must be positive");
    if (cfg.k_ref < 1) throw mrpi::InvalidArgument("k_ref must be positive");
    return cfg;
}

void add_run_options(CLI::App* sub, CliOptions& opt) {
    sub->add_option("--config", opt.config_path, "flat key = value config file");
    sub->add_option("--seed", opt.seed, "RNG seed (default 1)");
    sub->add_option("--dims", opt.dims, "state dimensions (exp3)")->delimiter(',');
    sub->add_option("--n-max", opt.n_max, "largest truncation length on the curve");
    sub->add_option("--dir-count", opt.dir_count, "sampled directions (default 2000)");
    sub->add_option("--k-ref", opt.k_ref, "reference truncation length (default 200)");
    sub->add_option("--epsilon", opt.epsilon, "tail tolerance (default 1e-3)");
    sub->add_option("--convention", opt.convention, "tail exponent convention: N or N+1");
    sub->add_option("--norm", opt.norm, "euclidean | diag[:count] | lyapunov");
    sub->add_option("--out", opt.out, "output directory (default ./out)");
}

int cmd_bound(double gamma, double r_w, std::optional<int> n, std::optional<double> epsilon) {
    using namespace mrpi;
    require_contraction(gamma, "bound");
    if (r_w < 0.0) throw InvalidArgument("bound: r_w must be nonnegative");
    if (!n && !epsilon) throw InvalidArgument("bound: provide --n and/or --epsilon");
    std::cout << "gamma = " << format_double(gamma) << "\n";
    std::cout << "r_w = " << format_double(r_w) << "\n";
    std::cout << "limit_radius = " << format_double(limit_radius(r_w, gamma)) << "\n";
    if (n) {
        const double tail = tail_bound(r_w, gamma, *n);
        std::cout << "n = " << *n << "\n";
        std::cout << "tail_bound = " << format_double(tail) << "\n";
    }
    if (epsilon) {
        const int n_min = truncation_index(*epsilon, gamma, r_w);
        std::cout << "epsilon = " << format_double(*epsilon) << "\n";
        std::cout << "n_min = " << n_min << "\n";
        std::cout << "tail_at_n_min = " << format_double(tail_bound(r_w, gamma, n_min)) << "\n";
    }
    return kExitOk;
}

int cmd_exp1(const mrpi::RunConfig& cfg) {
    const mrpi::Exp1Result res = mrpi::run_exp1(cfg);
    std::cout << "exp1: gamma = " << mrpi::format_double(res.gamma)
              << ", r_w = " << mrpi::format_double(res.r_w) << "\n";
    std::cout << "exp1: fitted slope = " << mrpi::format_double(res.slope)
              << ", ln(gamma) = " << mrpi::format_double(std::log(res.gamma))
              << ", relative error = " << mrpi::format_double(res.slope_rel_err)
              << (res.slope_rel_err <= 0.1 ? " (within 10%)" : " (outside 10%)") << "\n";
    for (const std::string& f : res.files)
        std::cout << "exp1: wrote " << (std::filesystem::path(cfg.output_dir) / f).string()
                  << "\n";
    if (!res.sound) {
        std::cerr << "exp1: SOUNDNESS VIOLATION: a numeric distance exceeded its bound\n";
        return kExitInvariant;
    }
    std::cout << "exp1: all rows sound\n";
    return kExitOk;
}

int cmd_exp2(const mrpi::RunConfig& cfg) {
    const mrpi::Exp2Result res = mrpi::run_exp2(cfg);
    std::cout << "exp2: gamma euclidean = " << mrpi::format_double(res.gamma_euclidean)
              << ", diagonal = " << mrpi::format_double(res.gamma_diagonal)
              << ", lyapunov = " << mrpi::format_double(res.gamma_lyapunov) << "\n";
    std::cout << "exp2: demo shear gamma " << mrpi::format_double(res.demo_gamma_euclidean)
              << " -> " << mrpi::format_double(res.demo_gamma_diagonal)
              << " under diag(1,81,...), bound ratio at N=5 = "
              << mrpi::format_double(res.demo_bound_ratio_n5) << "\n";
    for (const std::string& f : res.files)
        std::cout << "exp2: wrote " << (std::filesystem::path(cfg.output_dir) / f).string()
                  << "\n";
    bool ok = true;
    if (!res.sound) {
        std::cerr << "exp2: SOUNDNESS VIOLATION: a numeric distance exceeded its bound\n";
        ok = false;
    }
    if (!res.decreasing) {
        std::cerr << "exp2: INVARIANT VIOLATION: a bound curve is not strictly decreasing\n";
        ok = false;
    }
    if (!res.lyap_within_euclidean) {
        std::cerr << "exp2: INVARIANT VIOLATION: lyapunov gamma above euclidean gamma\n";
        ok = false;
    }
    if (res.demo_bound_ratio_n5 < 10.0) {
        std::cerr << "exp2: INVARIANT VIOLATION: demo bound ratio below 10\n";
        ok = false;
    }
    if (!ok) return kExitInvariant;
    std::cout << "exp2: all rows sound, bounds strictly decreasing\n";
    return kExitOk;
}

int cmd_exp3(const mrpi::RunConfig& cfg) {
    const mrpi::Exp3Result res = mrpi::run_exp3(cfg);
    for (const mrpi::Exp3DimResult& d : res.per_dim)
        std::cout << "exp3: dim " << d.dim << ": gamma = " << mrpi::format_double(d.gamma)
                  << ", r_w = " << mrpi::format_double(d.r_w)
                  << (d.radius_exact ? "" : " (conservative)") << ", "
                  << mrpi::format_double(d.millis) << " ms\n";
    for (const std::string& f : res.files)
        std::cout << "exp3: wrote " << (std::filesystem::path(cfg.output_dir) / f).string()
                  << "\n";
    if (!res.sound) {
        std::cerr << "exp3: SOUNDNESS VIOLATION: a numeric distance exceeded its bound\n";
        return kExitInvariant;
    }
    std::cout << "exp3: all rows sound for every dimension\n";
    return kExitOk;
}

int cmd_exp4(const mrpi::RunConfig& cfg, int rollouts, int steps) {
    const mrpi::Exp4Result res = mrpi::run_exp4(cfg, rollouts, steps);
    std::cout << "exp4: truncation length = " << res.truncation
              << ", gamma = " << mrpi::format_double(res.gamma)
              << ", r_w = " << mrpi::format_double(res.r_w) << "\n";
    std::cout << "exp4: nominal box volume baseline = "
              << mrpi::format_double(res.baseline_volume)
              << ", certified = " << mrpi::format_double(res.certified_volume) << "\n";
    std::cout << "exp4: worst tracking error norm = "
              << mrpi::format_double(res.max_error_norm) << "\n";
    for (const std::string& f : res.files)
        std::cout << "exp4: wrote " << (std::filesystem::path(cfg.output_dir) / f).string()
                  << "\n";
    bool ok = true;
    if (!res.dominance) {
        std::cerr << "exp4: INVARIANT VIOLATION: certified box does not dominate baseline\n";
        ok = false;
    }
    if (!res.volume_strict) {
        std::cerr << "exp4: INVARIANT VIOLATION: certified volume not strictly larger\n";
        ok = false;
    }
    if (!res.rpi_ok) {
        std::cerr << "exp4: INVARIANT VIOLATION: cross-section failed the invariance test\n";
        ok = false;
    }
    if (!res.zero_violations) {
        std::cerr << "exp4: CONSTRAINT VIOLATION during rollouts\n";
        ok = false;
    }
    if (!res.contained) {
        std::cerr << "exp4: INVARIANT VIOLATION: tracking error left the cross-section\n";
        ok = false;
    }
    if (!ok) return kExitInvariant;
    std::cout << "exp4: dominance, invariance, and all " << rollouts << "x" << steps
              << " rollout checks passed for both designs\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Truncated invariant-set certificates and tube MPC benchmarks"};
    app.set_version_flag("--version", mrpi::kVersionString);
    app.require_subcommand(1);

    // bound: closed-form certificate calculator.
    double gamma = 0.0, r_w = 0.0;
    std::optional<int> bound_n;
    std::optional<double> bound_epsilon;
    CLI::App* bound = app.add_subcommand("bound", "print a tail certificate");
    bound->add_option("--gamma", gamma, "contraction factor in (0,1)")->required();
    bound->add_option("--rw", r_w, "disturbance radius")->required();
    bound->add_option("--n", bound_n, "truncation length to certify");
    bound->add_option("--epsilon", bound_epsilon, "tolerance for the minimal length");

    CliOptions o1, o2, o3, o4;
    CLI::App* exp1 = app.add_subcommand("exp1", "6-D decay curve vs closed-form bound");
    add_run_options(exp1, o1);
    CLI::App* exp2 = app.add_subcommand("exp2", "norm shaping comparison");
    add_run_options(exp2, o2);
    CLI::App* exp3 = app.add_subcommand("exp3", "decay across state dimensions");
    add_run_options(exp3, o3);
    int rollouts = 100, steps = 50;
    CLI::App* exp4 = app.add_subcommand("exp4", "tube MPC feasible-set comparison");
    add_run_options(exp4, o4);
    exp4->add_option("--rollouts", rollouts, "Monte Carlo rollouts (default 100)");
    exp4->add_option("--steps", steps, "steps per rollout (default 50)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (bound->parsed()) return cmd_bound(gamma, r_w, bound_n, bound_epsilon);
        if (exp1->parsed()) return cmd_exp1(resolve_config(o1));
        if (exp2->parsed()) return cmd_exp2(resolve_config(o2));
        if (exp3->parsed()) return cmd_exp3(resolve_config(o3));
        if (exp4->parsed()) {
            if (rollouts < 1 || steps < 1)
                throw mrpi::InvalidArgument("rollouts and steps must be positive");
            return cmd_exp4(resolve_config(o4), rollouts, steps);
        }
    } catch (const mrpi::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
