// Command-line front end for the glassnet library: stable-set analysis,
// sign-pattern queries, bound/count curves, factorization, coupling checks,
// exact simulation, vector-field export and the self-checking oracles.
//
// Exit codes: 0 success, 1 usage or input error, 2 constraint-validation
// failure, 3 oracle mismatch.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "glassnet/glassnet.hpp"

namespace {

using namespace glassnet;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitOracleMismatch = 3;

std::string fmt(double v) { return json(v).dump(); }

struct OutputStream {
    std::ofstream file;
    std::ostream* out = &std::cout;

    void open(const std::string& path) {
        if (path.empty() || path == "-") return;
        file.open(path);
        if (!file) throw Error("cannot open output file: " + path);
        out = &file;
    }

    std::ostream& get() { return *out; }
};

GlassNetwork load_for_cli(const std::string& path, bool allow_violations) {
    try {
        return load_network_file(path, allow_violations);
    } catch (const ConstraintViolationError&) {
        // Reload without validation so the violating codes can be listed.
        const GlassNetwork net = load_network_file(path, true);
        const ConstraintReport rep = validate_constraint(net);
        json codes = json::array();
        for (const IndexSet& s : rep.violations) codes.push_back(s.members());
        std::cerr << json{{"error", "output constraint violated"}, {"violations", codes}}.dump()
                  << "\n";
        std::exit(kExitValidation);
    }
}

void warn_near_zero(const GlassNetwork& net) {
    const ConstraintReport rep = validate_constraint(net);
    for (const IndexSet& s : rep.near_zero)
        std::cerr << "warning: output for code " << s.to_string()
                  << " has a component within 1e-12 of zero; strict verdicts nearby are "
                     "fragile\n";
}

int run_analyze(const std::string& path, bool full, bool output_model, bool allow_violations,
                const std::string& output) {
    const GlassNetwork net = load_for_cli(path, allow_violations);
    warn_near_zero(net);
    OutputStream os;
    os.open(output);
    if (output_model) {
        for (const IndexSet& s : stable_sets_output_model(net))
            os.get() << json{{"set", s.members()}}.dump() << "\n";
        return kExitOk;
    }
    for (const StableSetReport& r : enumerate_stable_sets(net, full))
        os.get() << to_json(r).dump() << "\n";
    return kExitOk;
}

int run_signs(const std::optional<std::string>& pattern_of, int n_flag,
              const std::optional<std::string>& allows,
              const std::optional<std::string>& sign_stable,
              const std::optional<std::string>& minimal,
              const std::optional<std::string>& family_spec, bool want_ei,
              const std::optional<std::string>& count_mode, bool brute, int row,
              bool allow_violations, const std::string& output) {
    std::optional<SignPattern> pattern;
    int n = n_flag;
    if (pattern_of) {
        const GlassNetwork net = load_for_cli(*pattern_of, allow_violations);
        pattern = sign_pattern(net.weights());
        if (n == 0) n = net.n();
    }
    if (n == 0) throw CLI::ValidationError("--n", "dimension required (or use --pattern-of)");

    json out;
    out["n"] = n;
    if (pattern) out["pattern"] = pattern->to_rows();

    auto need_pattern = [&]() -> const SignPattern& {
        if (!pattern) throw CLI::ValidationError("--pattern-of", "a network file is required");
        return *pattern;
    };

    if (allows) out["allows"] = allows_stable(need_pattern(), parse_set_literal(*allows, n));
    if (sign_stable)
        out["sign_stable"] = is_sign_stable(need_pattern(), parse_set_literal(*sign_stable, n));
    if (minimal)
        out["requires_minimal_stability"] =
            requires_minimal_stability(need_pattern(), parse_set_literal(*minimal, n));

    if (family_spec) {
        const StableFamily fam = parse_family_literal(*family_spec, n);
        out["family"] = *family_spec;
        if (pattern) out["allows_family"] = allows_family(*pattern, fam);
        if (want_ei) {
            const EIBounds b = ei_bounds(fam, n);
            out["ei_bounds"] = {{"min_excitatory", b.min_excitatory},
                                {"min_inhibitory", b.min_inhibitory}};
        }
        if (count_mode) {
            // With "all", a family whose shape only fits some modes reports
            // the mismatch per mode instead of failing the whole query.
            auto run_mode = [&](SignatureMode mode, bool tolerant) {
                json entry;
                const int max_row = mode == SignatureMode::NonvanishingInput ? n - 1 : n;
                const int r = std::min(row, max_row);
                try {
                    entry["row"] = r;
                    entry["count"] = count_to_json(count_allowed_row_signatures(fam, n, r, mode));
                    if (brute)
                        entry["brute_force"] =
                            count_to_json(brute_force_row_signatures(fam, n, r, mode));
                } catch (const FamilyShapeError& e) {
                    if (!tolerant) throw;
                    entry = json{{"error", e.what()}};
                }
                return entry;
            };
            if (*count_mode == "all") {
                out["counts"] = {
                    {"unconstrained", run_mode(SignatureMode::Unconstrained, true)},
                    {"vanishing", run_mode(SignatureMode::VanishingInput, true)},
                    {"nonvanishing", run_mode(SignatureMode::NonvanishingInput, true)}};
            } else {
                out["counts"] = {{*count_mode, run_mode(parse_mode(*count_mode), false)}};
            }
        }
    } else if (want_ei || count_mode) {
        throw CLI::ValidationError("--family", "a family is required for bounds or counts");
    }

    OutputStream os;
    os.open(output);
    os.get() << out.dump() << "\n";
    return kExitOk;
}

int run_curves(const std::string& kind, int n, int set_count, int k1, const std::string& output) {
    if (n < 1) throw CLI::ValidationError("--n", "dimension must be positive");
    OutputStream os;
    os.open(output);
    os.get() << "k,E_bound,I_bound,allowed_fraction\n";

    auto emit = [&](int k, const StableFamily& fam, const std::vector<int>& row_of_kind) {
        const EIBounds b = ei_bounds(fam, n);
        // Fraction of full n x n sign patterns that stay allowed: product of
        // the per-row allowed fractions.
        long double fraction = 1.0L;
        const long double total = static_cast<long double>(detail::pow3(n));
        for (int row : row_of_kind) {
            const Int128 c =
                count_allowed_row_signatures(fam, n, row, SignatureMode::Unconstrained);
            fraction *= static_cast<long double>(c) / total;
        }
        os.get() << k << "," << b.min_excitatory << "," << b.min_inhibitory << ","
                 << fmt(static_cast<double>(fraction)) << "\n";
    };

    if (kind == "single") {
        for (int k = 1; k <= n; ++k) {
            const StableFamily fam =
                StableFamily::single(IndexSet::full(n).intersection(IndexSet(
                    n, k == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << k) - 1))));
            emit(k, fam, std::vector<int>(static_cast<std::size_t>(n), 1));
        }
    } else if (kind == "disjoint") {
        if (set_count < 1) throw CLI::ValidationError("--sets", "need at least one set");
        for (int k = 1; k * set_count <= n; ++k) {
            std::vector<IndexSet> sets;
            for (int t = 0; t < set_count; ++t) {
                IndexSet s = IndexSet::empty(n);
                for (int u = t * k + 1; u <= (t + 1) * k; ++u) s = s.with(u);
                sets.push_back(s);
            }
            emit(k, StableFamily::disjoint(std::move(sets)),
                 std::vector<int>(static_cast<std::size_t>(n), 1));
        }
    } else if (kind == "nested") {
        if (k1 < 1 || k1 > n) throw CLI::ValidationError("--k1", "innermost size outside 1..n");
        for (int k = k1; k <= n; ++k) {
            IndexSet inner = IndexSet::empty(n);
            for (int u = 1; u <= k1; ++u) inner = inner.with(u);
            IndexSet outer = inner;
            for (int u = k1 + 1; u <= k; ++u) outer = outer.with(u);
            const StableFamily fam = k == k1 ? StableFamily::nested({inner})
                                             : StableFamily::nested({inner, outer});
            std::vector<int> rows;
            for (int row = 1; row <= n; ++row) rows.push_back(row);
            emit(k, fam, rows);
        }
    } else {
        throw CLI::ValidationError("--kind", "expected single, disjoint or nested");
    }
    return kExitOk;
}

int run_factor(const std::string& path, const std::string& set_literal, double epsilon,
               bool blocks, bool allow_violations, const std::string& output) {
    const GlassNetwork net = load_for_cli(path, allow_violations);
    const IndexSet a = parse_set_literal(set_literal, net.n());
    const Factorization f = factorize(net, a, epsilon);
    if (f.ill_conditioned)
        std::cerr << "warning: X condition estimate " << fmt(f.condition_estimate)
                  << " exceeds 1e12; results may lose precision\n";

    Vec p(static_cast<std::size_t>(net.n()), 0.0);
    for (int i : a.members()) p[static_cast<std::size_t>(i - 1)] = 1.0;

    json out;
    out["set"] = a.members();
    out["epsilon"] = f.epsilon;
    out["x"] = f.x.to_rows();
    out["y"] = f.y.to_rows();
    out["x_inv_p"] = f.x.inverse() * p;
    out["residual"] = reconstruction_residual(f, net);
    if (blocks) {
        const BlockFactorization bf = factorize_blocks(net, a, epsilon);
        json jb;
        jb["epsilon"] = bf.epsilon;
        jb["principal"] = {{"x", bf.principal.x.to_rows()}, {"y", bf.principal.y.to_rows()}};
        jb["complement"] = bf.complement
                               ? json{{"x", bf.complement->x.to_rows()},
                                      {"y", bf.complement->y.to_rows()}}
                               : json(nullptr);
        out["blocks"] = std::move(jb);
    }

    OutputStream os;
    os.open(output);
    os.get() << out.dump() << "\n";
    return kExitOk;
}

int run_couple(const std::string& path, const std::vector<std::string>& compose,
               const std::vector<std::string>& decompose, const std::vector<std::string>& couple,
               const std::vector<std::string>& triple, bool allow_violations,
               const std::string& output) {
    const GlassNetwork net = load_for_cli(path, allow_violations);
    const int n = net.n();
    json out;
    if (!compose.empty()) {
        const CouplingVerdict v = compose_check(net, parse_set_literal(compose[0], n),
                                                parse_set_literal(compose[1], n));
        out["compose"] = to_json(v);
    }
    if (!decompose.empty()) {
        const CouplingVerdict v = decompose_check(net, parse_set_literal(decompose[0], n),
                                                  parse_set_literal(decompose[1], n));
        out["decompose"] = to_json(v);
    }
    if (!couple.empty()) {
        const CouplingVerdict v = coupling_check(net, parse_set_literal(couple[0], n),
                                                 parse_set_literal(couple[1], n));
        out["couple"] = to_json(v);
    }
    if (!triple.empty()) {
        const CouplingVerdict v =
            triple_coupling_check(net, parse_set_literal(triple[0], n),
                                  parse_set_literal(triple[1], n), parse_set_literal(triple[2], n));
        out["triple"] = to_json(v);
    }
    if (out.empty())
        throw CLI::ValidationError("couple",
                                   "choose one of --compose, --decompose, --couple, --triple");
    OutputStream os;
    os.open(output);
    os.get() << out.dump() << "\n";
    return kExitOk;
}

int run_simulate(const std::string& path, const std::string& x0_literal, double max_time,
                 int max_switches, double sample_dt, const std::string& format,
                 bool allow_violations, const std::string& output) {
    const GlassNetwork net = load_for_cli(path, allow_violations);
    const Vec x0 = parse_vector_literal(x0_literal);
    const Trajectory t = simulate(net, x0, max_time, max_switches);
    OutputStream os;
    os.open(output);
    if (format == "csv") {
        if (!(sample_dt > 0.0))
            throw CLI::ValidationError("--sample-dt", "csv output needs a sampling step");
        os.get() << "t";
        for (int i = 1; i <= net.n(); ++i) os.get() << ",x" << i;
        os.get() << "\n";
        for (const auto& [time, state] : sample_trajectory(net, t, sample_dt)) {
            os.get() << fmt(time);
            for (double v : state) os.get() << "," << fmt(v);
            os.get() << "\n";
        }
    } else {
        json out = to_json(t);
        if (sample_dt > 0.0) {
            json samples = json::array();
            for (const auto& [time, state] : sample_trajectory(net, t, sample_dt))
                samples.push_back({{"t", time}, {"x", state}});
            out["samples"] = std::move(samples);
        }
        os.get() << out.dump() << "\n";
    }
    return kExitOk;
}

std::optional<AxisRange> parse_range(const std::string& text) {
    const std::vector<std::string> parts = split(text, ':');
    if (parts.size() != 3) return std::nullopt;
    try {
        AxisRange r;
        r.lo = std::stod(parts[0]);
        r.hi = std::stod(parts[1]);
        r.steps = std::stoi(parts[2]);
        return r;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

int run_field(const std::string& path, const std::string& x_range, const std::string& y_range,
              const std::string& fixed_literal, bool allow_violations,
              const std::string& output) {
    const GlassNetwork net = load_for_cli(path, allow_violations);
    const std::optional<AxisRange> xr = parse_range(x_range);
    const std::optional<AxisRange> yr = parse_range(y_range);
    if (!xr || !yr)
        throw CLI::ValidationError("--x-range/--y-range", "expected lo:hi:steps");

    std::map<int, double> fixed;
    if (!fixed_literal.empty()) {
        for (const std::string& tok : split(fixed_literal, ',')) {
            const std::size_t eq = tok.find('=');
            if (eq == std::string::npos)
                throw CLI::ValidationError("--fixed", "expected unit=value pairs");
            fixed[std::stoi(tok.substr(0, eq))] = std::stod(tok.substr(eq + 1));
        }
    }
    if (net.is_embedded() && !fixed.count(net.clamped_unit())) fixed[net.clamped_unit()] = 1.0;

    OutputStream os;
    os.open(output);
    os.get() << "x,y,vx,vy\n";
    for (const FieldPoint& p : vector_field_grid(net, *xr, *yr, fixed))
        os.get() << fmt(p.x) << "," << fmt(p.y) << "," << fmt(p.vx) << "," << fmt(p.vy) << "\n";
    return kExitOk;
}

int run_oracle(bool counts, bool theorems, bool equivalence, bool dynamics, int n, int trials,
               int families, std::uint64_t seed, const std::string& mode,
               const std::string& output) {
    const bool all = !counts && !theorems && !equivalence && !dynamics;
    OutputStream os;
    os.open(output);
    OracleReport total;

    auto show = [&](const std::string& name, const OracleReport& rep) {
        os.get() << name << ": " << (rep.ok() ? "pass" : "FAIL") << " (" << rep.checks
                 << " checks";
        if (!rep.diagnostics.empty())
            os.get() << ", " << rep.diagnostics.size() << " printed-formula diagnostics";
        os.get() << ")\n";
        total.merge(rep);
    };

    if (all || counts) {
        std::optional<SignatureMode> only;
        if (mode != "all") only = parse_mode(mode);
        show("counts", run_counts_oracle(seed, std::min(n, 8), families, only));
    }
    if (all || theorems) {
        show("theorems.coupling",
             run_coupling_consistency_oracle(seed, trials, 2, std::min(n, 8)));
        show("theorems.signs", run_sign_theorems_oracle(seed, 500, 100, 500, std::min(n, 6)));
    }
    if (all || equivalence) show("equivalence", run_equivalence_oracle(seed, trials, std::min(n, 8)));
    if (dynamics) show("dynamics", run_dynamics_oracle(seed, trials, 20, std::min(n, 5)));

    std::vector<std::string> distinct;
    for (const std::string& d : total.diagnostics)
        if (std::find(distinct.begin(), distinct.end(), d) == distinct.end())
            distinct.push_back(d);
    const std::size_t shown = std::min<std::size_t>(distinct.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) os.get() << "note: " << distinct[i] << "\n";
    if (distinct.size() > shown)
        os.get() << "note: ... and " << distinct.size() - shown
                 << " more distinct printed-formula deviations\n";
    for (const std::string& f : total.failures) os.get() << "mismatch: " << f << "\n";
    if (!total.ok()) return kExitOracleMismatch;
    os.get() << "all oracles passed (" << total.checks << " checks)\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"glassnet: multistability analysis for Heaviside-threshold networks"};
    app.require_subcommand(1);

    std::string network_path, output;
    bool allow_violations = false;
    bool full = false;

    auto add_common = [&](CLI::App* cmd, bool with_network = true) {
        if (with_network)
            cmd->add_option("network", network_path, "network JSON file")->required();
        cmd->add_option("--output", output, "write results to a file instead of stdout");
        cmd->add_flag("--allow-violations", allow_violations,
                      "analyze even when the output constraint fails");
    };

    CLI::App* analyze = app.add_subcommand("analyze", "enumerate stable sets");
    bool output_model = false;
    add_common(analyze);
    analyze->add_flag("--full", full, "include unstable parts in the report");
    analyze->add_flag("--output-model", output_model,
                      "report the stable sets of the output-activated model instead");

    CLI::App* signs_cmd = app.add_subcommand("signs", "sign-pattern queries");
    std::optional<std::string> pattern_of, allows, sign_stable, minimal, family_spec, count_mode;
    int n_flag = 0, row = 1;
    bool want_ei = false, brute = false;
    signs_cmd->add_option("--pattern-of", pattern_of, "network file whose sign pattern is used");
    signs_cmd->add_option("--n", n_flag, "ambient dimension when no network is given");
    signs_cmd->add_option("--allows", allows, "set literal to test for allowed stability");
    signs_cmd->add_option("--sign-stable", sign_stable, "set literal to test for sign stability");
    signs_cmd->add_option("--minimal", minimal,
                          "set literal to test for required minimal stability");
    signs_cmd->add_option("--family", family_spec, "family literal, e.g. nested:1;1,2");
    signs_cmd->add_flag("--ei-bounds", want_ei, "emit connection-count bounds for the family");
    signs_cmd->add_option("--count-signatures", count_mode,
                          "count allowed row signatures (unconstrained, vanishing, "
                          "nonvanishing or all)");
    signs_cmd->add_flag("--brute-force", brute, "also report the enumeration count");
    signs_cmd->add_option("--row", row, "row for the signature counts (default 1)");
    signs_cmd->add_option("--output", output, "write results to a file instead of stdout");
    signs_cmd->add_flag("--allow-violations", allow_violations,
                        "load networks even when the output constraint fails");

    CLI::App* curves = app.add_subcommand("curves", "bound/count curves as CSV");
    std::string kind = "single";
    int curve_n = 10, set_count = 2, k1 = 1;
    curves->add_option("--kind", kind, "single, disjoint or nested")->required();
    curves->add_option("--n", curve_n, "network dimension")->required();
    curves->add_option("--sets", set_count, "number of disjoint sets (disjoint kind)");
    curves->add_option("--k1", k1, "innermost set size (nested kind)");
    curves->add_option("--output", output, "write results to a file instead of stdout");

    CLI::App* factor = app.add_subcommand("factor", "semipositive factorization");
    std::string set_literal;
    double epsilon = 0.5;
    bool blocks = false;
    add_common(factor);
    factor->add_option("--set", set_literal, "stable set literal")->required();
    factor->add_option("--epsilon", epsilon, "construction epsilon (default 1/2)");
    factor->add_flag("--blocks", blocks, "also emit the blockwise factorization");

    CLI::App* couple = app.add_subcommand("couple", "composition/decomposition/coupling checks");
    std::vector<std::string> compose, decompose, couple_sets, triple;
    add_common(couple);
    couple->add_option("--compose", compose, "two disjoint stable sets")->expected(2);
    couple->add_option("--decompose", decompose, "stable set and proper subset")->expected(2);
    couple->add_option("--couple", couple_sets, "stable set and candidate set")->expected(2);
    couple->add_option("--triple", triple, "two stable sets and a candidate set")->expected(3);

    CLI::App* simulate_cmd = app.add_subcommand("simulate", "exact event-driven simulation");
    std::string x0_literal, format = "json";
    double max_time = 50.0, sample_dt = 0.0;
    int max_switches = 10000;
    add_common(simulate_cmd);
    simulate_cmd->add_option("--x0", x0_literal, "initial state, comma separated")->required();
    simulate_cmd->add_option("--max-time", max_time, "time horizon (default 50)");
    simulate_cmd->add_option("--max-switches", max_switches, "switch budget (default 10000)");
    simulate_cmd->add_option("--sample-dt", sample_dt, "dense sampling step");
    simulate_cmd->add_option("--format", format, "json (default) or csv of samples");

    CLI::App* field = app.add_subcommand("field", "vector-field grid as CSV");
    std::string x_range = "-1:1:21", y_range = "-1:1:21", fixed_literal;
    add_common(field);
    field->add_option("--x-range", x_range, "lo:hi:steps for the first free axis");
    field->add_option("--y-range", y_range, "lo:hi:steps for the second free axis");
    field->add_option("--fixed", fixed_literal,
                      "clamped coordinates as unit=value pairs, comma separated");

    CLI::App* oracle = app.add_subcommand("oracle", "run the self-checking oracles");
    bool o_counts = false, o_theorems = false, o_equivalence = false, o_dynamics = false;
    int o_n = 6, o_trials = 200, o_families = 50;
    std::uint64_t o_seed = 0;
    std::string o_mode = "all";
    oracle->add_flag("--counts", o_counts, "signature-count oracle");
    oracle->add_flag("--theorems", o_theorems, "coupling and sign-theorem oracles");
    oracle->add_flag("--equivalence", o_equivalence, "output-model equivalence oracle");
    oracle->add_flag("--dynamics", o_dynamics, "simulation agreement oracle");
    oracle->add_option("--n", o_n, "largest dimension (default 6)");
    oracle->add_option("--trials", o_trials, "trial count (default 200)");
    oracle->add_option("--families", o_families, "families per kind for counts (default 50)");
    oracle->add_option("--seed", o_seed, "random seed (default 0)");
    oracle->add_option("--mode", o_mode, "signature mode filter for counts (default all)");
    oracle->add_option("--output", output, "write results to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (analyze->parsed())
            return run_analyze(network_path, full, output_model, allow_violations, output);
        if (signs_cmd->parsed())
            return run_signs(pattern_of, n_flag, allows, sign_stable, minimal, family_spec,
                             want_ei, count_mode, brute, row, allow_violations, output);
        if (curves->parsed()) return run_curves(kind, curve_n, set_count, k1, output);
        if (factor->parsed())
            return run_factor(network_path, set_literal, epsilon, blocks, allow_violations,
                              output);
        if (couple->parsed())
            return run_couple(network_path, compose, decompose, couple_sets, triple,
                              allow_violations, output);
        if (simulate_cmd->parsed())
            return run_simulate(network_path, x0_literal, max_time, max_switches, sample_dt,
                                format, allow_violations, output);
        if (field->parsed())
            return run_field(network_path, x_range, y_range, fixed_literal, allow_violations,
                             output);
        if (oracle->parsed())
            return run_oracle(o_counts, o_theorems, o_equivalence, o_dynamics, o_n, o_trials,
                              o_families, o_seed, o_mode, output);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
