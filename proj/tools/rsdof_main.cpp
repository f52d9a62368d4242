// rsdof command-line front end: region construction and plot slices, scheme
// synthesis, brute-force verification, and finite-SNR simulation.

#include "rsdof/rsdof.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace rsdof;

// Distinct exit codes: 0 success, 1 verification failure, 2 exterior target,
// 3 enumeration guard exceeded, 4 configuration error, 5 usage/parse error.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kExteriorTarget = 2;
constexpr int kGuardExceeded = 3;
constexpr int kConfigError = 4;
constexpr int kUsageError = 5;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ExteriorTarget : std::runtime_error {
    using std::runtime_error::runtime_error;
};

CsitProfile profile_from_flag(const std::string& alpha_flag) {
    try {
        return CsitProfile::from_user_order(parse_rational_list(alpha_flag));
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("bad --alpha: ") + e.what());
    }
}

DofTuple target_from_flag(const CsitProfile& profile, const std::string& target_flag) {
    std::vector<rational> user_order;
    try {
        user_order = parse_rational_list(target_flag);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("bad --target: ") + e.what());
    }
    if (user_order.size() != profile.user_count())
        throw UsageError("--target must list one DoF per user");
    return profile.to_canonical(user_order);
}

std::string subset_label(const std::vector<std::size_t>& subset) {
    std::string label = "{";
    for (std::size_t k = 0; k < subset.size(); ++k)
        label += (k ? "," : "") + std::to_string(subset[k] + 1);
    return label + "}";
}

void report_exterior(std::ostream& os, const MembershipReport& report) {
    os << "target is outside the region\n";
    for (std::size_t u : report.negative_users)
        os << "  violated: d" << (u + 1) << " >= 0\n";
    for (const SubsetConstraint& c : report.violated)
        os << "  violated: subset " << subset_label(c.subset) << " sum <= " << to_pq_string(c.rhs)
           << "\n";
}

std::string format_double(double v, int digits = 4) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
    return buf;
}

// ---------------------------------------------------------------------------
// region
// ---------------------------------------------------------------------------

struct RegionArgs {
    std::string alpha;
    std::string format = "table";
    std::string plot_slice;
    unsigned slice_samples = 8;
    std::string output = "-";
};

void print_profile_header(std::ostream& os, const CsitProfile& profile) {
    os << "users (canonical order, strongest CSIT first):";
    for (std::size_t i = 0; i < profile.user_count(); ++i)
        os << " alpha" << (i + 1) << "=" << to_pq_string(profile.alpha(i));
    os << "\ninput-to-canonical map:";
    for (std::size_t i = 0; i < profile.permutation().size(); ++i)
        os << " " << (i + 1) << "->" << (profile.permutation()[i] + 1);
    os << "\n";
}

int run_region(const RegionArgs& args) {
    const CsitProfile profile = profile_from_flag(args.alpha);
    const RegionDescription region = build_region(profile);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (args.output != "-") {
        file.open(args.output);
        if (!file) throw ConfigError("cannot open output file " + args.output);
        os = &file;
    }

    if (!args.plot_slice.empty()) {
        std::vector<std::optional<rational>> fixed(profile.user_count());
        if (args.plot_slice != "none") {
            std::stringstream ss(args.plot_slice);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto eq = item.find('=');
                if (eq == std::string::npos || item.size() < 4 || item[0] != 'd')
                    throw UsageError("bad --plot-slice entry '" + item + "' (want d<k>=<value>)");
                std::size_t user = 0;
                try {
                    user = std::stoul(item.substr(1, eq - 1));
                } catch (...) {
                    throw UsageError("bad --plot-slice user in '" + item + "'");
                }
                if (user == 0 || user > profile.user_count())
                    throw UsageError("--plot-slice user out of range in '" + item + "'");
                fixed[profile.permutation()[user - 1]] = parse_rational(item.substr(eq + 1));
            }
        }
        std::vector<std::size_t> free_users;
        for (std::size_t i = 0; i < fixed.size(); ++i)
            if (!fixed[i]) free_users.push_back(i);
        const auto emit_polyline = [&](const SlicePolygon& slice, const std::string& prefix) {
            for (const auto& v : slice.vertices)
                *os << prefix << ser::double_to_string(to_double(v[0])) << ','
                    << ser::double_to_string(to_double(v[1])) << "\n";
            if (slice.vertices.size() > 2) // close the loop
                *os << prefix << ser::double_to_string(to_double(slice.vertices[0][0])) << ','
                    << ser::double_to_string(to_double(slice.vertices[0][1])) << "\n";
        };
        if (free_users.size() == 2) {
            const SlicePolygon slice = region_slice(region, fixed);
            *os << "d" << (slice.free_x + 1) << ",d" << (slice.free_y + 1) << "\n";
            emit_polyline(slice, "");
        } else if (free_users.size() == 3) {
            // 3D cross-section: step the first free coordinate and stack the
            // resulting boundary polylines.
            if (args.slice_samples < 1) throw UsageError("--slice-samples must be positive");
            const std::size_t stepped = free_users[0];
            *os << "d" << (stepped + 1) << ",d" << (free_users[1] + 1) << ",d"
                << (free_users[2] + 1) << "\n";
            for (unsigned i = 0; i <= args.slice_samples; ++i) {
                const rational level(i, args.slice_samples);
                auto leveled = fixed;
                leveled[stepped] = level;
                const SlicePolygon slice = region_slice(region, leveled);
                if (slice.vertices.empty()) continue;
                emit_polyline(slice, ser::double_to_string(to_double(level)) + ",");
            }
        } else {
            throw UsageError("--plot-slice must leave exactly two or three coordinates free");
        }
        return kOk;
    }

    if (args.format == "json") {
        *os << to_json(region).dump(2) << "\n";
    } else {
        print_profile_header(*os, profile);
        *os << "constraints (" << region.constraints.size() << " subset bounds + "
            << profile.user_count() << " non-negativity bounds):\n";
        for (const SubsetConstraint& c : region.constraints) {
            *os << "  ";
            for (std::size_t k = 0; k < c.subset.size(); ++k)
                *os << (k ? " + " : "") << "d" << (c.subset[k] + 1);
            *os << " <= " << to_pq_string(c.rhs) << "\n";
        }
        for (std::size_t i = 0; i < profile.user_count(); ++i)
            *os << "  d" << (i + 1) << " >= 0\n";
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// synthesize
// ---------------------------------------------------------------------------

struct SynthesizeArgs {
    std::string alpha;
    std::string target;
    std::string format = "json";
};

void print_scheme_table(std::ostream& os, const RsScheme& scheme, const std::string& indent) {
    os << indent << "levels:";
    for (std::size_t j = 0; j < scheme.user_count(); ++j)
        os << " " << (scheme.active[j] ? to_pq_string(scheme.levels[j]) : std::string("-"));
    os << "\n" << indent << "common split:";
    for (const rational& s : scheme.common_split) os << " " << to_pq_string(s);
    os << "\n";
}

int run_synthesize(const SynthesizeArgs& args) {
    const CsitProfile profile = profile_from_flag(args.alpha);
    const DofTuple target = target_from_flag(profile, args.target);

    const RegionDescription region = build_region(profile);
    const MembershipReport membership = contains(region, target);
    if (!membership.inside) {
        report_exterior(std::cerr, membership);
        return kExteriorTarget;
    }

    const TimeSharingPlan plan = synthesize(profile, target);
    if (args.format == "json") {
        std::cout << to_json(plan).dump(2) << "\n";
    } else {
        print_profile_header(std::cout, profile);
        std::cout << "plan with " << plan.components.size() << " component(s):\n";
        for (const PlanComponent& component : plan.components) {
            std::cout << "  weight " << to_pq_string(component.weight) << ": ";
            if (!component.scheme) {
                std::cout << "silence\n";
                continue;
            }
            std::cout << "\n";
            print_scheme_table(std::cout, *component.scheme, "    ");
        }
        std::cout << "achieved:";
        for (const rational& v : plan.achieved) std::cout << " " << to_pq_string(v);
        std::cout << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyArgs {
    std::string alpha;
    std::size_t trials = 10000;
    std::uint64_t seed = 0;
    std::size_t max_k = kDefaultVertexGuard;
    std::string format = "table";
};

int run_verify(const VerifyArgs& args) {
    const CsitProfile profile = profile_from_flag(args.alpha);
    const VertexReport report = verify_vertices(profile, args.max_k);
    const AuditReport audit = random_membership_audit(profile, args.trials, args.seed);
    const bool ok = report.all_synthesized && audit.violations.empty();

    if (args.format == "json") {
        json j;
        j["vertex_report"] = to_json(report);
        j["membership_audit"] = to_json(audit);
        j["ok"] = ok;
        std::cout << j.dump(2) << "\n";
    } else {
        print_profile_header(std::cout, profile);
        std::cout << report.vertices.size() << " vertices ("
                  << report.systems_examined << " hyperplane subsets examined, "
                  << report.singular_systems << " singular):\n";
        for (const VertexInfo& v : report.vertices) {
            std::cout << "  (";
            for (std::size_t i = 0; i < v.point.size(); ++i)
                std::cout << (i ? ", " : "") << to_pq_string(v.point[i]);
            std::cout << ")  tight:";
            for (const auto& s : v.active_subsets) std::cout << " " << subset_label(s);
            for (std::size_t u : v.zero_users) std::cout << " d" << (u + 1) << "=0";
            std::cout << "  synthesized: " << (v.synthesized ? "yes" : "NO") << "\n";
        }
        std::cout << "membership audit: " << audit.trials << " random schemes, "
                  << audit.violations.size() << " violation(s)\n";
        std::cout << (ok ? "verification OK\n" : "verification FAILED\n");
    }
    return ok ? kOk : kFailure;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string alpha;
    std::string target;
    std::string scheme_file;
    int tx_antennas = 0; // 0 = default to K
    std::string snr_grid = "1e6,1e8,1e10,1e12,1e14";
    int trials = 1000;
    std::uint64_t seed = 0;
    std::string csv;
    std::string format = "table";
};

std::vector<double> parse_snr_grid(const std::string& flag) {
    std::vector<double> grid;
    std::stringstream ss(flag);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            grid.push_back(std::stod(item));
        } catch (...) {
            throw UsageError("bad --snr-grid entry '" + item + "'");
        }
    }
    return grid;
}

int run_simulate(const SimulateArgs& args) {
    const CsitProfile profile = profile_from_flag(args.alpha);
    const std::size_t K = profile.user_count();
    const int M = args.tx_antennas == 0 ? static_cast<int>(K) : args.tx_antennas;
    if (M < static_cast<int>(K))
        throw ConfigError("need at least as many antennas as users (M=" + std::to_string(M) +
                          ", K=" + std::to_string(K) + ")");
    const std::vector<double> grid = parse_snr_grid(args.snr_grid);

    DofTuple predicted;
    SweepResult sweep;
    try {
        if (!args.scheme_file.empty()) {
            std::ifstream in(args.scheme_file);
            if (!in) throw ConfigError("cannot read scheme file " + args.scheme_file);
            json j = json::parse(in);
            const RsScheme scheme = scheme_from_json(j);
            predicted = total_dof(scheme, profile).total;
            sweep = run_sweep({profile, M, scheme, grid, args.trials, args.seed});
        } else {
            const DofTuple target = target_from_flag(profile, args.target);
            const MembershipReport membership = contains(build_region(profile), target);
            if (!membership.inside) {
                report_exterior(std::cerr, membership);
                return kExteriorTarget;
            }
            predicted = target;
            const TimeSharingPlan plan = synthesize(profile, target);
            sweep = simulate_plan(profile, M, plan, grid, args.trials, args.seed);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    if (!args.csv.empty()) {
        if (args.csv == "-") {
            sweep_to_csv(sweep, std::cout);
        } else {
            std::ofstream out(args.csv);
            if (!out) throw ConfigError("cannot open CSV file " + args.csv);
            sweep_to_csv(sweep, out);
        }
    }

    if (args.format == "json") {
        json j;
        j["predicted"] = ser::rationals_to_json(predicted);
        j["sweep"] = to_json(sweep);
        std::cout << j.dump(2) << "\n";
    } else if (args.csv != "-") {
        print_profile_header(std::cout, profile);
        std::cout << "user  predicted      fitted_slope  half_width  residual_rms\n";
        for (std::size_t j = 0; j < K; ++j) {
            const SlopeFit& fit = sweep.user_fits[j];
            std::cout << "  " << (j + 1) << "   " << to_pq_string(predicted[j]) << " ("
                      << format_double(to_double(predicted[j])) << ")  "
                      << format_double(fit.slope) << "  " << format_double(fit.half_width)
                      << "  " << format_double(fit.residual_rms) << "\n";
        }
        std::cout << "common-rate slope: " << format_double(sweep.common_fit.slope) << "\n";
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"DoF-region toolkit for the K-user MISO broadcast channel with partial CSIT"};
    app.require_subcommand(1);

    RegionArgs region_args;
    CLI::App* region_cmd = app.add_subcommand(
        "region", "Print the DoF region's constraints or a 2D plot slice");
    region_cmd->add_option("--alpha", region_args.alpha, "CSIT exponents, e.g. 0.6,0.3")
        ->required();
    region_cmd->add_option("--format", region_args.format, "table|json")
        ->check(CLI::IsMember({"table", "json"}));
    region_cmd->add_option("--plot-slice", region_args.plot_slice,
                           "fix coordinates (d3=0.2,...; 'none' fixes nothing) leaving 2 free "
                           "(exact boundary polyline as CSV) or 3 free (stacked polylines)");
    region_cmd->add_option("--slice-samples", region_args.slice_samples,
                           "levels of the stepped coordinate for 3-coordinate slices");
    region_cmd->add_option("--output", region_args.output, "output file, '-' for stdout");

    SynthesizeArgs synth_args;
    CLI::App* synth_cmd = app.add_subcommand(
        "synthesize", "Construct a rate-splitting plan achieving a target DoF tuple");
    synth_cmd->add_option("--alpha", synth_args.alpha, "CSIT exponents")->required();
    synth_cmd->add_option("--target", synth_args.target, "target DoF tuple, e.g. 0.9,0.4")
        ->required();
    synth_cmd->add_option("--format", synth_args.format, "json|table")
        ->check(CLI::IsMember({"table", "json"}));

    VerifyArgs verify_args;
    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "Enumerate vertices, synthesize each, and audit random schemes");
    verify_cmd->add_option("--alpha", verify_args.alpha, "CSIT exponents")->required();
    verify_cmd->add_option("--trials", verify_args.trials, "membership-audit trials");
    verify_cmd->add_option("--seed", verify_args.seed, "RNG seed");
    verify_cmd->add_option("--max-k", verify_args.max_k, "vertex-enumeration user guard");
    verify_cmd->add_option("--format", verify_args.format, "table|json")
        ->check(CLI::IsMember({"table", "json"}));

    SimulateArgs sim_args;
    CLI::App* sim_cmd = app.add_subcommand(
        "simulate", "Monte Carlo SNR sweep of a synthesized or supplied scheme");
    sim_cmd->add_option("--alpha", sim_args.alpha, "CSIT exponents")->required();
    sim_cmd->add_option("--target", sim_args.target, "target DoF tuple to synthesize");
    sim_cmd->add_option("--scheme", sim_args.scheme_file, "JSON scheme file to simulate as-is");
    sim_cmd->add_option("--M", sim_args.tx_antennas, "transmit antennas (default: user count)");
    sim_cmd->add_option("--snr-grid", sim_args.snr_grid, "comma-separated linear SNR values");
    sim_cmd->add_option("--trials", sim_args.trials, "Monte Carlo trials per grid point");
    sim_cmd->add_option("--seed", sim_args.seed, "RNG seed");
    sim_cmd->add_option("--csv", sim_args.csv, "write the sweep as CSV ('-' for stdout)");
    sim_cmd->add_option("--format", sim_args.format, "table|json")
        ->check(CLI::IsMember({"table", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (region_cmd->parsed()) return run_region(region_args);
        if (synth_cmd->parsed()) return run_synthesize(synth_args);
        if (verify_cmd->parsed()) return run_verify(verify_args);
        if (sim_cmd->parsed()) {
            if (sim_args.target.empty() == sim_args.scheme_file.empty())
                throw UsageError("simulate needs exactly one of --target or --scheme");
            return run_simulate(sim_args);
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const GuardExceeded& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kGuardExceeded;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsageError;
}
