#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wlp/cdf.hpp"
#include "wlp/dist.hpp"
#include "wlp/expr.hpp"
#include "wlp/jsonio.hpp"
#include "wlp/moments.hpp"
#include "wlp/oracle.hpp"
#include "wlp/reliability.hpp"
#include "wlp/setfunc.hpp"

namespace wlp::cli {

namespace detail {

// All numeric output goes through here: 17 significant digits, round-trip
// safe, so identical inputs produce byte-identical output. Non-finite lattice
// bounds are emitted as JSON strings.
inline std::string num(double x) { return double_to_string_17(x); }

inline std::string num_or_str(double x) {
    if (std::isfinite(x)) return num(x);
    return x > 0 ? "\"inf\"" : "\"-inf\"";
}

inline std::string num_array(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += num(xs[i]);
    }
    out += ']';
    return out;
}

inline double parse_bound(const std::string& token) {
    if (token == "inf" || token == "+inf") return kInf;
    if (token == "-inf") return -kInf;
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used == token.size()) return v;
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("malformed bound \"" + token + "\"");
}

inline std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> parts;
    std::string item;
    std::istringstream stream(text);
    while (std::getline(stream, item, ',')) parts.push_back(item);
    return parts;
}

inline std::vector<double> parse_doubles(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split_csv(text)) out.push_back(parse_bound(part));
    return out;
}

inline LatticeInterval parse_lattice(const std::string& text) {
    const auto parts = split_csv(text);
    if (parts.size() != 2)
        throw std::invalid_argument("--lattice expects \"a,b\"");
    return {parse_bound(parts[0]), parse_bound(parts[1])};
}

inline std::string read_source(const std::string& path, std::istream& in) {
    if (path == "-") {
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open \"" + path + "\"");
    std::ostringstream buf;
    buf << file.rdbuf();
    return buf.str();
}

// Grid spec "lo,hi,count" -> evenly spaced points, endpoints included.
inline std::vector<double> parse_grid(const std::string& text) {
    const auto parts = parse_doubles(text);
    if (parts.size() != 3 || !(parts[2] >= 2) || parts[2] != std::floor(parts[2]))
        throw std::invalid_argument("--grid expects \"lo,hi,count\" with count >= 2");
    const auto count = static_cast<int>(parts[2]);
    std::vector<double> ys(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j)
        ys[static_cast<std::size_t>(j)] =
            parts[0] + (parts[1] - parts[0]) * static_cast<double>(j) / (count - 1);
    return ys;
}

struct DistSources {
    std::string dist_path;
    bool all_uniform = false;
    std::string lambdas;
};

// Expands the shorthand flags (--uniform, --lambdas) to the canonical config.
inline RandomVector resolve_distributions(int n, const DistSources& src, std::istream& in) {
    const int given = (!src.dist_path.empty()) + src.all_uniform + (!src.lambdas.empty());
    if (given == 0)
        throw std::invalid_argument("no distributions given: use --dist, --uniform or --lambdas");
    if (given > 1)
        throw std::invalid_argument("--dist, --uniform and --lambdas are mutually exclusive");
    RandomVector rv;
    if (src.all_uniform) {
        for (int i = 0; i < n; ++i) rv.push_back(Distribution::uniform(0.0, 1.0));
    } else if (!src.lambdas.empty()) {
        for (double l : parse_doubles(src.lambdas)) rv.push_back(Distribution::exponential(l));
    } else {
        rv = distributions_from_json(read_source(src.dist_path, in));
    }
    check_arity(rv, n);
    return rv;
}

inline CdfMethod parse_method(const std::string& name) {
    if (name == "disjunctive") return CdfMethod::Disjunctive;
    if (name == "conjunctive") return CdfMethod::Conjunctive;
    if (name == "mobius-disjunctive") return CdfMethod::MobiusDisjunctive;
    if (name == "mobius-conjunctive") return CdfMethod::MobiusConjunctive;
    throw std::invalid_argument("unknown method \"" + name + "\"");
}

inline ExpectationRoute parse_route(const std::string& name) {
    if (name == "survival") return ExpectationRoute::SurvivalIntegral;
    if (name == "subset-sum") return ExpectationRoute::SubsetSum;
    throw std::invalid_argument("unknown route \"" + name + "\"");
}

inline void emit_curve(std::ostream& out, const std::string& format, const char* xname,
                       const char* yname, const std::vector<double>& xs,
                       const std::vector<double>& ys) {
    if (format == "csv") {
        out << xname << ',' << yname << '\n';
        for (std::size_t i = 0; i < xs.size(); ++i)
            out << num(xs[i]) << ',' << num(ys[i]) << '\n';
    } else {
        out << "{\"" << xname << "\":" << num_array(xs) << ",\"" << yname
            << "\":" << num_array(ys) << "}\n";
    }
}

}  // namespace detail

// Runs one CLI invocation. Exit codes: 0 success, 1 parse/config error
// (message on err), 2 numerical failure (tolerance unmet or hypothesis
// violation).
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err,
               std::istream& in = std::cin) {
    CLI::App app{"weighted lattice polynomials of independent random variables"};
    app.require_subcommand(1);

    std::string expr_text, lattice_text, format = "json", method_name = "disjunctive";
    std::string route_name = "survival", point_text, grid_text, measure_path;
    std::string raw_orders, central_orders;
    detail::DistSources dists;
    double at_y = 0.0, t_value = 0.0, mgf_t = 0.0;
    std::uint64_t samples = 100000, seed = 0;
    bool want_mttf = false, want_expect = false;

    auto add_common = [&](CLI::App* sub, bool with_dists) {
        sub->add_option("--expr", expr_text, "expression, e.g. \"max(min(x1,x2),x3)\"")
            ->required();
        sub->add_option("--lattice", lattice_text, "lattice bounds \"a,b\" (default 0,1)");
        if (with_dists) {
            sub->add_option("--dist", dists.dist_path, "distribution config JSON (path or -)");
            sub->add_flag("--uniform", dists.all_uniform, "all variables uniform(0,1)");
            sub->add_option("--lambdas", dists.lambdas, "exponential rates \"l1,l2,...\"");
        }
        sub->add_option("--format", format, "json or csv (curves only)");
    };

    auto* cmd_eval = app.add_subcommand("eval", "evaluate the expression at a point");
    add_common(cmd_eval, false);
    cmd_eval->add_option("--point", point_text, "coordinates \"x1,x2,...\"")->required();

    auto* cmd_table = app.add_subcommand("table", "dump the vertex table alpha(S) = p(e_S)");
    add_common(cmd_table, false);

    auto* cmd_cdf = app.add_subcommand("cdf", "distribution function of Y_p");
    add_common(cmd_cdf, true);
    cmd_cdf->add_option("--at", at_y, "single evaluation point y");
    cmd_cdf->add_option("--grid", grid_text, "evaluation grid \"lo,hi,count\"");
    cmd_cdf->add_option("--method", method_name,
                        "disjunctive | conjunctive | mobius-disjunctive | mobius-conjunctive");

    auto* cmd_moment = app.add_subcommand("moment", "mean, raw/central moments, MGF of Y_p");
    add_common(cmd_moment, true);
    cmd_moment->add_option("--raw", raw_orders, "raw moment orders \"2,3\"");
    cmd_moment->add_option("--central", central_orders, "central moment orders \"2\"");
    auto* mgf_opt = cmd_moment->add_option("--mgf-t", mgf_t, "MGF argument t");
    cmd_moment->add_option("--route", route_name, "survival | subset-sum");

    auto* cmd_sugeno = app.add_subcommand("sugeno", "Sugeno integral / expectation of a measure");
    cmd_sugeno->add_option("--measure", measure_path, "fuzzy measure JSON (path or -)")
        ->required();
    cmd_sugeno->add_option("--point", point_text, "integrate the point \"x1,x2,...\"");
    cmd_sugeno->add_flag("--expect", want_expect, "expected value over uniform inputs");

    auto* cmd_choquet = app.add_subcommand("choquet",
                                           "Choquet integral / expectation of a measure");
    cmd_choquet->add_option("--measure", measure_path, "fuzzy measure JSON (path or -)")
        ->required();
    cmd_choquet->add_option("--point", point_text, "integrate the point \"x1,x2,...\"");
    cmd_choquet->add_flag("--expect", want_expect, "expected value over uniform inputs");

    auto* cmd_rel = app.add_subcommand("reliability", "system reliability and MTTF");
    add_common(cmd_rel, true);
    cmd_rel->add_flag("--mttf", want_mttf, "mean time to failure");
    cmd_rel->add_option("--t", t_value, "reliability at time t");
    cmd_rel->add_option("--grid", grid_text, "reliability curve grid \"lo,hi,count\"");

    auto* cmd_sim = app.add_subcommand("simulate", "seeded Monte Carlo summary");
    add_common(cmd_sim, true);
    cmd_sim->add_option("--samples", samples, "sample count (default 100000)");
    cmd_sim->add_option("--seed", seed, "PRNG seed (default 0)");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);

        const bool reliability_cmd = cmd_rel->parsed();
        const LatticeInterval lattice =
            !lattice_text.empty() ? detail::parse_lattice(lattice_text)
                                  : (reliability_cmd ? LatticeInterval::nonnegative()
                                                     : LatticeInterval::unit());

        if (cmd_eval->parsed()) {
            const WlpExpr expr = parse(expr_text, lattice);
            const auto point = detail::parse_doubles(point_text);
            out << "{\"value\":" << detail::num(evaluate(expr, point, lattice)) << "}\n";
        } else if (cmd_table->parsed()) {
            const WlpExpr expr = parse(expr_text, lattice);
            const VertexTable table = vertex_table(expr, lattice);
            out << "{\"n\":" << table.n << ",\"a\":" << detail::num_or_str(lattice.a)
                << ",\"b\":" << detail::num_or_str(lattice.b) << ",\"alpha\":[";
            for (std::size_t i = 0; i < table.alpha.size(); ++i) {
                if (i) out << ',';
                out << detail::num_or_str(table.alpha[i]);
            }
            out << "]}\n";
        } else if (cmd_cdf->parsed()) {
            const WlpExpr expr = parse(expr_text, lattice);
            const VertexTable table = vertex_table(expr, lattice);
            const RandomVector rv = detail::resolve_distributions(table.n, dists, in);
            if (!supports_within(rv, lattice))
                throw std::invalid_argument("a distribution's support leaves the lattice");
            const CdfMethod method = detail::parse_method(method_name);
            if (!grid_text.empty()) {
                const auto ys = detail::parse_grid(grid_text);
                detail::emit_curve(out, format, "y", "F", ys, cdf_grid(table, rv, ys, method));
            } else if (cmd_cdf->count("--at")) {
                out << "{\"y\":" << detail::num(at_y)
                    << ",\"F\":" << detail::num(cdf_at(table, rv, at_y, method)) << "}\n";
            } else {
                throw std::invalid_argument("cdf needs --at or --grid");
            }
        } else if (cmd_moment->parsed()) {
            const WlpExpr expr = parse(expr_text, lattice);
            const VertexTable table = vertex_table(expr, lattice);
            const RandomVector rv = detail::resolve_distributions(table.n, dists, in);
            if (!supports_within(rv, lattice))
                throw std::invalid_argument("a distribution's support leaves the lattice");
            const ExpectationRoute route = detail::parse_route(route_name);
            const double mean = expectation(table, rv, GSpec::identity(), route);
            out << "{\"mean\":" << detail::num(mean);
            if (!raw_orders.empty()) {
                out << ",\"raw\":{";
                bool first = true;
                for (double r : detail::parse_doubles(raw_orders)) {
                    if (!first) out << ',';
                    out << "\"" << static_cast<int>(r) << "\":"
                        << detail::num(raw_moment(table, rv, static_cast<int>(r), route));
                    first = false;
                }
                out << '}';
            }
            if (!central_orders.empty()) {
                out << ",\"central\":{";
                bool first = true;
                for (double r : detail::parse_doubles(central_orders)) {
                    if (!first) out << ',';
                    out << "\"" << static_cast<int>(r) << "\":"
                        << detail::num(expectation(
                               table, rv, GSpec::centered_power(static_cast<int>(r), mean),
                               route));
                    first = false;
                }
                out << '}';
            }
            if (mgf_opt->count()) {
                out << ",\"mgf\":{\"t\":" << detail::num(mgf_t)
                    << ",\"value\":" << detail::num(mgf(table, rv, mgf_t, route)) << '}';
            }
            out << "}\n";
        } else if (cmd_sugeno->parsed() || cmd_choquet->parsed()) {
            const bool sugeno_cmd = cmd_sugeno->parsed();
            const FuzzyMeasure measure = FuzzyMeasure::on_unit_interval(
                setfunction_from_json(detail::read_source(measure_path, in)));
            if (want_expect) {
                const double v =
                    sugeno_cmd ? sugeno_expectation(measure) : choquet_expectation(measure);
                out << "{\"value\":" << detail::num(v) << "}\n";
            } else if (!point_text.empty()) {
                const auto point = detail::parse_doubles(point_text);
                const double v = sugeno_cmd ? sugeno_integral(measure, point)
                                            : choquet_integral(measure, point);
                out << "{\"value\":" << detail::num(v) << "}\n";
            } else {
                throw std::invalid_argument("needs --point or --expect");
            }
        } else if (cmd_rel->parsed()) {
            const WlpExpr expr = parse(expr_text, lattice);
            const RandomVector rv =
                detail::resolve_distributions(expr.arity(), dists, in);
            const SystemModel model(expr, rv);
            if (want_mttf) {
                double value;
                if (!dists.lambdas.empty()) {
                    const ExponentialRates rates(detail::parse_doubles(dists.lambdas));
                    value = mttf_exponential(model.table, rates);
                } else {
                    value = mean_lifetime_numeric(model);
                }
                out << "{\"mttf\":" << detail::num(value) << "}\n";
            } else if (!grid_text.empty()) {
                const auto ts = detail::parse_grid(grid_text);
                std::vector<double> rs;
                rs.reserve(ts.size());
                for (double t : ts) rs.push_back(system_reliability(model, t));
                detail::emit_curve(out, format, "t", "R", ts, rs);
            } else if (cmd_rel->count("--t")) {
                out << "{\"t\":" << detail::num(t_value)
                    << ",\"R\":" << detail::num(system_reliability(model, t_value)) << "}\n";
            } else {
                throw std::invalid_argument("reliability needs --mttf, --t or --grid");
            }
        } else if (cmd_sim->parsed()) {
            const WlpExpr expr = parse(expr_text, lattice);
            const RandomVector rv =
                detail::resolve_distributions(expr.arity(), dists, in);
            const SimulationPlan plan{expr, rv, lattice, samples, seed};
            const SimulationSummary s = simulate(plan);
            out << "{\"samples\":" << s.samples << ",\"seed\":" << s.seed
                << ",\"mean\":" << detail::num(s.mean) << ",\"se\":" << detail::num(s.se)
                << ",\"moments\":[" << detail::num(s.raw_moments[0]) << ','
                << detail::num(s.raw_moments[1]) << ',' << detail::num(s.raw_moments[2]) << ','
                << detail::num(s.raw_moments[3]) << "],\"ecdf\":{\"y\":"
                << detail::num_array(s.ecdf_y) << ",\"F\":" << detail::num_array(s.ecdf_F)
                << "}}\n";
        }
        return 0;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const quadrature_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const hypothesis_error& e) {
        err << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace wlp::cli
