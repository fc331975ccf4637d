#include "cfinv/cli.hpp"

#include <cfinv/errors.hpp>
#include <cfinv/model_catalog.hpp>
#include <cfinv/oracles.hpp>
#include <cfinv/special.hpp>
#include <cfinv/zerofind.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cfinv::cli {
namespace {

struct ConfigFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string command;
    std::string model = "levy_area";
    std::string params = "{}";
    std::string grid;
    std::vector<double> points;
    double tol = 1e-12;
    std::optional<std::size_t> n_terms;
    std::uint64_t seed = 0;
    double gate = 1e-4;
    std::string output;
    std::string format = "csv";
    bool bessel = false;
    double nu = 0.0;
    std::size_t count = 0;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return buf;
}

// Columns are written as CSV with a header, or as a JSON array of objects.
class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add(std::vector<nlohmann::json> row) { rows_.push_back(std::move(row)); }

    void write(std::ostream& out, const std::string& format) const {
        if (format == "json") {
            auto doc = nlohmann::json::array();
            for (const auto& row : rows_) {
                nlohmann::json obj;
                for (std::size_t i = 0; i < columns_.size(); ++i) obj[columns_[i]] = row[i];
                doc.push_back(std::move(obj));
            }
            out << doc.dump(2) << '\n';
            return;
        }
        for (std::size_t i = 0; i < columns_.size(); ++i) out << (i ? "," : "") << columns_[i];
        out << '\n';
        for (const auto& row : rows_) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                if (i) out << ',';
                const auto& cell = row[i];
                if (cell.is_number_float()) out << num(cell.get<double>());
                else if (cell.is_string()) out << cell.get<std::string>();
                else out << cell.dump();
            }
            out << '\n';
        }
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<nlohmann::json>> rows_;
};

std::vector<double> parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw ConfigFailure("--grid expects lo:hi:n");
    double lo = 0.0, hi = 0.0;
    long n = 0;
    try {
        std::size_t used = 0;
        lo = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
        hi = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
        n = std::stol(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
    } catch (const std::logic_error&) {
        throw ConfigFailure("bad --grid '" + text + "'");
    }
    if (n < 1) throw ConfigFailure("--grid needs at least one point");
    if (!(lo <= hi)) throw ConfigFailure("--grid needs lo <= hi");
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) xs[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return xs;
}

std::vector<double> abscissae(const Options& o, std::vector<double> fallback = {}) {
    if (!o.grid.empty() && !o.points.empty()) throw ConfigFailure("give --grid or --points, not both");
    if (!o.grid.empty()) return parse_grid(o.grid);
    if (!o.points.empty()) return o.points;
    if (!fallback.empty()) return fallback;
    throw ConfigFailure(o.command + " needs --grid or --points");
}

EntireQuotientModel build_model(const Options& o) {
    nlohmann::json params;
    try {
        params = nlohmann::json::parse(o.params);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigFailure(std::string("--params is not JSON: ") + e.what());
    }
    if (!params.is_object()) throw ConfigFailure("--params must be a JSON object");
    return make_model(o.model, params);
}

void check_support(const EntireQuotientModel& m, const std::vector<double>& xs, bool open_at_origin) {
    for (double x : xs) {
        const double y = x - m.translation();
        const bool half = m.support() != Support::SymmetricLine;
        if ((half && y < 0.0) || (open_at_origin && y == 0.0))
            throw ConfigFailure("point " + num(x) + " is outside the support of " + m.kind());
    }
}

// Evaluates f at every x, spreading points over the available cores; results
// keep grid order and the first failure (by index) is rethrown.
template <class F>
std::vector<EvalResult> evaluate(const std::vector<double>& xs, F f) {
    std::vector<EvalResult> out(xs.size());
    std::vector<std::exception_ptr> errors(xs.size());
    const std::size_t workers =
        std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), xs.size());
    auto work = [&](std::size_t w) {
        for (std::size_t i = w; i < xs.size(); i += workers) {
            try {
                out[i] = f(xs[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

int grid_command(const Options& o, std::ostream& out, bool cdf) {
    const auto m = build_model(o);
    const auto xs = abscissae(o);
    check_support(m, xs, !cdf);
    const auto s = density_series(m);
    const std::size_t max_terms = o.n_terms.value_or(200000);
    // reflected back to the side the model variable lives on
    const auto side = m.support() == Support::NegativeHalfLine ? s.reflected() : s;
    const auto results = evaluate(xs, [&](double x) {
        if (cdf) return model_cdf(m, s, x, o.tol);
        return eval_density(side, x - m.translation(), o.tol, max_terms);
    });
    Table t({"x", "value", "truncation_bound", "terms_used"});
    for (std::size_t i = 0; i < xs.size(); ++i)
        t.add({xs[i], results[i].value, results[i].truncation_bound, results[i].terms_used});
    t.write(out, o.format);
    return kOk;
}

int charfn_command(const Options& o, std::ostream& out) {
    const auto m = build_model(o);
    const auto ts = abscissae(o);
    const bool closed = m.has_closed_phi() && !o.n_terms;
    const std::size_t n = o.n_terms.value_or(m.finite_factors() ? m.finite_factors() : 1000);
    Table t({"t", "re", "im"});
    for (double x : ts) {
        const cplx v = closed ? m.closed_phi(x) : phi_partial(m, x, n);
        t.add({x, v.real(), v.imag()});
    }
    t.write(out, o.format);
    return kOk;
}

int zeros_command(const Options& o, std::ostream& out) {
    const std::size_t count = o.count ? o.count : 10;
    Table t({"k", "zero", "residual"});
    if (o.bessel) {
        if (o.nu < 0.0) throw ConfigFailure("--nu must be >= 0");
        const auto z = bessel_zeros(o.nu, count);
        for (std::size_t k = 0; k < z.size(); ++k)
            t.add({k + 1, z[k], std::abs(special::bessel_j(o.nu, z[k]))});
    } else {
        const auto m = build_model(o);
        const auto z = m.g_zeros().prefix(m.finite_factors() ? std::min(count, m.finite_factors()) : count);
        const auto& g = m.parts().g_eval;
        for (std::size_t k = 0; k < z.size(); ++k) t.add({k + 1, z[k], g ? std::abs(g(z[k])) : 0.0});
    }
    t.write(out, o.format);
    return kOk;
}

double oracle_density(const EntireQuotientModel& m, double x, double gate) {
    const CharFn phi = m.has_closed_phi() ? CharFn([&m](double t) { return m.closed_phi(t); })
                                          : CharFn([&m](double t) {
                                                return phi_partial(m, t, m.finite_factors());
                                            });
    // the gate sets the oracle accuracy, within what double quadrature can reach
    const double tol = std::max(1e-2 * gate, 1e-10);
    for (double t_max = suggest_t_max(phi, tol);; t_max *= 2.0) {
        try {
            return gil_pelaez_density(phi, x, {t_max, tol});
        } catch (const NumericError& e) {
            if (e.kind() != ErrorKind::TailTooHeavy || t_max > 1e6) throw;
        }
    }
}

int verify_command(const Options& o, std::ostream& out, std::ostream& err) {
    const auto m = build_model(o);
    const auto xs = abscissae(o, {0.25, 0.5, 1.0, 2.0});
    check_support(m, xs, true);
    const auto s = density_series(m);
    const bool gaussian = m.kind() == "sinh_ratio";
    std::vector<OracleReport> rows;
    for (double x : xs) {
        const double series = model_density(m, s, x, o.tol).value;
        if (gaussian) {
            const double u = m.params()["u"], v = m.params()["v"];
            rows.push_back(make_report(x, series, gaussian_sum_density(u, v, x, 8), OracleKind::GaussianSum));
        } else {
            rows.push_back(make_report(x, series, oracle_density(m, x, o.gate), OracleKind::GilPelaez));
        }
    }
    if (o.format == "json") {
        auto doc = nlohmann::json::array();
        for (const auto& r : rows)
            doc.push_back({{"point", r.point},
                           {"series", r.series_value},
                           {"oracle", r.oracle_value},
                           {"diff", r.abs_diff},
                           {"kind", to_string(r.kind)}});
        out << doc.dump(2) << '\n';
    } else {
        write_csv(out, rows);
    }
    double worst = 0.0;
    for (const auto& r : rows) worst = std::max(worst, r.abs_diff);
    if (!(worst <= o.gate)) {
        err << "verify: max abs diff " << num(worst) << " exceeds gate " << num(o.gate) << '\n';
        return kGateFailed;
    }
    return kOk;
}

int sample_command(const Options& o, std::ostream& out) {
    const auto m = build_model(o);
    const std::size_t count = o.count ? o.count : 100000;
    const std::size_t cap = o.n_terms.value_or(std::size_t{1} << 16);
    const std::size_t n = sampling_factors(m, cap);
    auto xs = m.symmetric() ? sample_symmetric_bondesson(m, n, count, o.seed) : sample_halfline(m, n, count, o.seed);
    Table t({"index", "value"});
    for (std::size_t i = 0; i < xs.size(); ++i) t.add({i, xs[i] + m.translation()});
    t.write(out, o.format);
    return kOk;
}

int mass_command(const Options& o, std::ostream& out) {
    const auto m = build_model(o);
    const auto s = density_series(m);
    Table t({"atom_mass", "total_mass"});
    t.add({s.atom_mass(), total_mass(s, std::max(o.tol, 1e-12))});
    t.write(out, o.format);
    return kOk;
}

int dispatch(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.command == "density") return grid_command(o, out, false);
    if (o.command == "cdf") return grid_command(o, out, true);
    if (o.command == "charfn") return charfn_command(o, out);
    if (o.command == "zeros") return zeros_command(o, out);
    if (o.command == "verify") return verify_command(o, out, err);
    if (o.command == "sample") return sample_command(o, out);
    return mass_command(o, out);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Densities, distribution functions and samples from zero sequences of entire functions"};
    app.require_subcommand(1, 1);
    std::vector<CLI::App*> commands;
    for (const char* name : {"density", "cdf", "charfn", "zeros", "verify", "sample", "mass"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--model", o.model, "catalog model name");
        sub->add_option("--params", o.params, "model parameters as a JSON object");
        sub->add_option("--grid", o.grid, "evaluation grid lo:hi:n");
        sub->add_option("--points", o.points, "explicit evaluation points")->delimiter(',');
        sub->add_option("--tol", o.tol, "absolute tolerance for series evaluation")->check(CLI::PositiveNumber);
        sub->add_option("--n-terms", o.n_terms, "term cap (density/cdf), factor count (charfn, sample)");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--gate", o.gate, "verify: largest accepted |series - oracle|")->check(CLI::PositiveNumber);
        sub->add_option("--output", o.output, "output file (default stdout)");
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--count", o.count, "zeros: how many; sample: sample size");
        if (std::string(name) == "zeros") {
            sub->add_flag("--bessel", o.bessel, "zeros of J_nu instead of a model's g");
            sub->add_option("--nu", o.nu, "Bessel order");
        }
        commands.push_back(sub);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }
    for (auto* sub : commands)
        if (sub->parsed()) o.command = sub->get_name();

    try {
        if (o.output.empty()) return dispatch(o, out, err);
        std::ostringstream buffer;
        const int code = dispatch(o, buffer, err);
        std::ofstream file(o.output, std::ios::binary);
        if (!file) throw ConfigFailure("cannot write " + o.output);
        file << buffer.str();
        return code;
    } catch (const ConfigFailure& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericError& e) {
        err << "error: " << e.what() << '\n';
        return e.kind() == ErrorKind::ConfigError ? kConfigError : kNumericError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kNumericError;
    }
}

}  // namespace cfinv::cli
