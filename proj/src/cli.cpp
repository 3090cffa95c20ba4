#include "revbound/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "revbound/bounds.hpp"
#include "revbound/dual_certificates.hpp"
#include "revbound/errors.hpp"
#include "revbound/gamma_toolkit.hpp"
#include "revbound/lp.hpp"
#include "revbound/mechanisms.hpp"
#include "revbound/priors.hpp"

namespace revbound::cli {

Check check_le(std::string name, double value, double limit) {
    return {std::move(name), value, limit, "<=", value <= limit};
}

Check check_ge(std::string name, double value, double limit) {
    return {std::move(name), value, limit, ">=", value >= limit};
}

bool OutputRecord::ok() const noexcept {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.ok; });
}

Json to_json(const OutputRecord& record) {
    Json j;
    j["command"] = record.command;
    j["inputs"] = record.inputs;
    j["results"] = record.results;
    j["provenance"] = record.provenance;
    j["version"] = record.version;
    if (record.seed) j["seed"] = *record.seed;
    Json checks = Json::array();
    Json violations = Json::array();
    for (const Check& c : record.checks) {
        Json entry = {{"name", c.name}, {"value", c.value}, {"relation", c.relation},
                      {"limit", c.limit}, {"ok", c.ok}};
        if (!c.ok) violations.push_back(entry);
        checks.push_back(std::move(entry));
    }
    j["checks"] = std::move(checks);
    j["violations"] = std::move(violations);
    j["ok"] = record.ok();
    return j;
}

OutputRecord record_from_json(const Json& j) {
    OutputRecord r;
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs");
    r.results = j.at("results");
    r.provenance = j.at("provenance").get<std::string>();
    r.version = j.at("version").get<std::string>();
    if (j.contains("seed")) r.seed = j.at("seed").get<std::uint64_t>();
    for (const Json& c : j.at("checks"))
        r.checks.push_back({c.at("name").get<std::string>(), c.at("value").get<double>(),
                            c.at("limit").get<double>(), c.at("relation").get<std::string>(),
                            c.at("ok").get<bool>()});
    return r;
}

namespace {

std::string number(double v, int digits) {
    std::ostringstream s;
    s << std::setprecision(digits) << v;
    return s.str();
}

std::string render(const Json& v, int digits) {
    if (v.is_number_float()) return number(v.get<double>(), digits);
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string s;
        for (const Json& e : v) {
            if (!s.empty()) s += ',';
            s += render(e, digits);
        }
        return s;
    }
    return v.dump();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + '"';
}

}  // namespace

std::string format_table(const OutputRecord& record) {
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("command", record.command);
    for (const auto& [k, v] : record.inputs.items()) rows.emplace_back(k, render(v, 9));
    for (const auto& [k, v] : record.results.items()) rows.emplace_back(k, render(v, 9));
    rows.emplace_back("provenance", record.provenance);
    if (record.seed) rows.emplace_back("seed", std::to_string(*record.seed));
    for (const Check& c : record.checks)
        rows.emplace_back("check " + c.name, number(c.value, 9) + " " + c.relation + " " +
                                                 number(c.limit, 9) + (c.ok ? "  ok" : "  FAIL"));
    rows.emplace_back("status", record.ok() ? "ok" : "FAIL");
    std::size_t width = 0;
    for (const auto& row : rows) width = std::max(width, row.first.size());
    std::ostringstream s;
    for (const auto& [k, v] : rows) s << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
    return s.str();
}

std::string format_csv(const OutputRecord& record) {
    std::ostringstream s;
    s << "section,key,value\n";
    s << "record,command," << csv_field(record.command) << '\n';
    for (const auto& [k, v] : record.inputs.items()) s << "input," << k << ',' << csv_field(render(v, 17)) << '\n';
    for (const auto& [k, v] : record.results.items()) s << "result," << k << ',' << csv_field(render(v, 17)) << '\n';
    s << "record,provenance," << record.provenance << '\n';
    s << "record,version," << record.version << '\n';
    if (record.seed) s << "record,seed," << *record.seed << '\n';
    for (const Check& c : record.checks) s << "check," << csv_field(c.name) << ',' << (c.ok ? "ok" : "FAIL") << '\n';
    s << "record,ok," << (record.ok() ? "true" : "false") << '\n';
    return s.str();
}

std::vector<FigureRow> figure_rows(int which, int max_m, unsigned precision_bits) {
    if (which != 1 && which != 2) throw InvalidArgument("figure must be 1 or 2");
    if (max_m < 1 || max_m > 200) throw InvalidArgument("max_m must lie in 1..200");
    std::vector<FigureRow> rows;
    rows.reserve(static_cast<std::size_t>(max_m));
    for (int m = 1; m <= max_m; ++m) {
        FigureRow row;
        row.m = m;
        if (which == 1) {
            row.ratio = bounds::ratio_separate_uniform(m);
            row.ratio_bundle = bounds::ratio_bundle_uniform(m, precision_bits);
        } else {
            row.ratio = bounds::ratio_separate_exponential(m);
        }
        rows.push_back(row);
    }
    return rows;
}

std::string figure_csv(int which, const std::vector<FigureRow>& rows) {
    std::ostringstream s;
    s << (which == 1 ? "m,ratio_sep,ratio_bundle\n" : "m,ratio_sep_exp\n");
    for (const FigureRow& r : rows) {
        s << r.m << ',' << number(r.ratio, 17);
        if (which == 1) s << ',' << number(r.ratio_bundle.value_or(NAN), 17);
        s << '\n';
    }
    return s.str();
}

std::string figure_json(int which, const std::vector<FigureRow>& rows) {
    Json j;
    j["figure"] = which;
    j["version"] = kVersion;
    j["provenance"] = "closed-form";
    Json data = Json::array();
    for (const FigureRow& r : rows) {
        Json row = {{"m", r.m}};
        if (which == 1) {
            row["ratio_sep"] = r.ratio;
            row["ratio_bundle"] = r.ratio_bundle.value_or(NAN);
        } else {
            row["ratio_sep_exp"] = r.ratio;
        }
        data.push_back(std::move(row));
    }
    j["rows"] = std::move(data);
    return j.dump(2) + "\n";
}

std::vector<FigureRow> parse_figure_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw InvalidArgument("empty figure CSV");
    const bool bundle = line == "m,ratio_sep,ratio_bundle";
    if (!bundle && line != "m,ratio_sep_exp") throw InvalidArgument("unknown figure CSV header: " + line);
    std::vector<FigureRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string cell;
        FigureRow r;
        std::getline(fields, cell, ',');
        r.m = std::stoi(cell);
        std::getline(fields, cell, ',');
        r.ratio = std::stod(cell);
        if (bundle) {
            std::getline(fields, cell, ',');
            r.ratio_bundle = std::stod(cell);
        }
        rows.push_back(r);
    }
    return rows;
}

namespace {

struct UsageError : Error {
    using Error::Error;
};

Json rates_json(const std::vector<double>& rates) {
    Json a = Json::array();
    for (double r : rates) a.push_back(r);
    return a;
}

void require_rates(const std::vector<double>& rates) {
    if (rates.empty()) throw UsageError("--lambdas needs at least one rate");
    for (double r : rates)
        if (!(r > 0.0) || !std::isfinite(r)) throw UsageError("--lambdas entries must be positive and finite");
}

OutputRecord bounds_record(const bounds::BoundReport& rep) {
    OutputRecord rec;
    rec.provenance = "closed-form";
    rec.results["upper_bound"] = rep.upper_bound;
    rec.results["surplus_bound"] = rep.surplus_bound;
    rec.results["srev"] = rep.srev;
    if (rep.brev) rec.results["brev"] = *rep.brev;
    if (rep.brev_price) rec.results["brev_price"] = *rep.brev_price;
    rec.results["ratio_sep"] = rep.ratio_sep;
    if (rep.ratio_bundle) rec.results["ratio_bundle"] = *rep.ratio_bundle;
    rec.checks.push_back(check_ge("upper_bound >= srev", rep.upper_bound, rep.srev));
    if (rep.brev) rec.checks.push_back(check_ge("upper_bound >= brev", rep.upper_bound, *rep.brev));
    rec.checks.push_back(check_le("upper_bound <= surplus", rep.upper_bound, rep.surplus_bound));
    return rec;
}

// Closed-form revenue of a posted bundle price, when one is available.
std::optional<double> bundle_revenue(const ProductPrior& prior, double price, unsigned bits) {
    const int m = static_cast<int>(prior.items());
    if (prior.family() == Family::UniformUnit) return price * IrwinHall(m, bits).survival(price);
    const std::vector<double> rates = prior.rates();
    if (std::adjacent_find(rates.begin(), rates.end(), std::not_equal_to<>()) != rates.end())
        return std::nullopt;
    // Sum of m i.i.d. exponentials: P(S > p) = Gamma(m, rate p) / (m-1)!.
    const gamma::LogReal tail = gamma::upper_incomplete_gamma(m, rates[0] * price);
    return price * std::exp(tail.log_abs - std::lgamma(static_cast<double>(m)));
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Revenue bounds, dual certificates and simple-mechanism oracles"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);
    app.fallthrough();

    std::string format = "table";
    app.add_option("--format", format, "Output format for records (table, json, csv)")
        ->check(CLI::IsMember({"table", "json", "csv"}));
    unsigned bits = 0;
    app.add_option("--precision-bits", bits,
                   "Working precision for Irwin-Hall sums (default: REVBOUND_PRECISION_BITS or 256)");

    // bounds
    auto* bounds_cmd = app.add_subcommand("bounds", "Revenue upper bounds and approximation ratios");
    std::string bounds_setting;
    int bounds_m = 0;
    std::vector<double> bounds_rates;
    bounds_cmd->add_option("setting", bounds_setting, "uniform or exp")->required()
        ->check(CLI::IsMember({"uniform", "exp"}));
    bounds_cmd->add_option("--m", bounds_m, "Number of i.i.d. U[0,1] items")->check(CLI::PositiveNumber);
    bounds_cmd->add_option("--lambdas", bounds_rates, "Comma-separated exponential rates")->delimiter(',');

    // fig
    auto* fig_cmd = app.add_subcommand("fig", "Approximation-ratio curve data");
    int fig_which = 1;
    int fig_max_m = 100;
    std::string fig_out;
    std::string fig_format = "csv";
    fig_cmd->add_option("which", fig_which, "1 (uniform) or 2 (exponential)")->required()
        ->check(CLI::IsMember({1, 2}));
    fig_cmd->add_option("--max-m", fig_max_m, "Largest m (at most 200)")->check(CLI::Range(1, 200));
    fig_cmd->add_option("--out", fig_out, "Output path (default: standard output)");
    fig_cmd->add_option("--format", fig_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    // gamma
    auto* gamma_cmd = app.add_subcommand("gamma", "gamma*_m and G(m)");
    int gamma_m = 0;
    gamma_cmd->add_option("--m", gamma_m, "Number of items")->required()->check(CLI::PositiveNumber);

    // verify-dual
    auto* dual_cmd = app.add_subcommand("verify-dual", "Numerically verify a dual certificate");
    std::string dual_setting;
    int dual_m = 2;
    int dual_grid = 0;
    std::vector<double> dual_rates;
    double dual_w_max = 0.0;
    std::size_t dual_qmc = 10'000'000;
    dual_cmd->add_option("setting", dual_setting, "uniform or exp")->required()
        ->check(CLI::IsMember({"uniform", "exp"}));
    dual_cmd->add_option("--m", dual_m, "Items for the uniform dual (1..4)");
    dual_cmd->add_option("--grid", dual_grid, "Cells per axis");
    dual_cmd->add_option("--lambdas", dual_rates, "Comma-separated exponential rates")->delimiter(',');
    dual_cmd->add_option("--w-max", dual_w_max, "Truncation in w (default gamma* + 40)");
    dual_cmd->add_option("--qmc-points", dual_qmc, "Quasi-random points for m = 3");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo revenue of a simple mechanism");
    std::string sim_mech;
    std::string sim_prior;
    int sim_m = 0;
    std::vector<double> sim_rates;
    std::vector<double> sim_prices;
    double sim_price = -1.0;
    std::size_t sim_n = 1'000'000;
    std::uint64_t sim_seed = 1;
    sim_cmd->add_option("mechanism", sim_mech, "proportional, separate or bundle")->required()
        ->check(CLI::IsMember({"proportional", "separate", "bundle"}));
    sim_cmd->add_option("--prior", sim_prior, "uniform or exp (default: exp with --lambdas, else uniform)")
        ->check(CLI::IsMember({"uniform", "exp"}));
    sim_cmd->add_option("--m", sim_m, "Items for the uniform prior")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--lambdas", sim_rates, "Comma-separated exponential rates")->delimiter(',');
    sim_cmd->add_option("--prices", sim_prices, "Item prices for separate selling (default: Myerson)")
        ->delimiter(',');
    sim_cmd->add_option("--price", sim_price, "Bundle price (default: optimal where known)");
    sim_cmd->add_option("--n", sim_n, "Number of draws (at least 1000)");
    sim_cmd->add_option("--seed", sim_seed, "Random seed");

    // lp
    auto* lp_cmd = app.add_subcommand("lp", "Discretized optimal-revenue linear program");
    std::string lp_prior;
    int lp_m = 1;
    std::vector<double> lp_rates;
    std::size_t lp_n = 11;
    double lp_q = 0.999;
    lp_cmd->add_option("--prior", lp_prior, "uniform or exp (default: exp with --lambdas, else uniform)")
        ->check(CLI::IsMember({"uniform", "exp"}));
    lp_cmd->add_option("--m", lp_m, "Items for the uniform prior")->check(CLI::PositiveNumber);
    lp_cmd->add_option("--lambdas", lp_rates, "Comma-separated exponential rates")->delimiter(',');
    lp_cmd->add_option("--n", lp_n, "Grid points per axis");
    lp_cmd->add_option("--quantile", lp_q, "Exponential truncation quantile");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    std::string echo;
    for (int i = 1; i < argc; ++i) {
        if (i > 1) echo += ' ';
        echo += argv[i];
    }

    auto emit = [&](OutputRecord rec) {
        rec.command = echo;
        if (format == "json")
            out << to_json(rec).dump(2) << '\n';
        else if (format == "csv")
            out << format_csv(rec);
        else
            out << format_table(rec);
        return rec.ok() ? 0 : 1;
    };

    try {
        if (bits == 0) {
            try {
                bits = default_precision_bits();
            } catch (const InvalidArgument& e) {
                throw UsageError(e.what());
            }
        }

        if (bounds_cmd->parsed()) {
            OutputRecord rec;
            if (bounds_setting == "uniform") {
                if (bounds_m < 1) throw UsageError("bounds uniform needs --m");
                rec = bounds_record(bounds::uniform_report(bounds_m, bits));
                rec.inputs["setting"] = "uniform";
                rec.inputs["m"] = bounds_m;
                rec.inputs["precision_bits"] = bits;
            } else {
                require_rates(bounds_rates);
                const bounds::BoundReport rep = bounds::exponential_report(bounds_rates);
                rec = bounds_record(rep);
                rec.inputs["setting"] = "exp";
                rec.inputs["lambdas"] = rates_json(bounds_rates);
                if (rep.brev)
                    rec.checks.push_back(check_le("bundle tightness |brev - upper| / upper",
                                                  std::abs(*rep.brev - rep.upper_bound) / rep.upper_bound,
                                                  1e-12));
            }
            return emit(std::move(rec));
        }

        if (fig_cmd->parsed()) {
            const std::vector<FigureRow> rows = figure_rows(fig_which, fig_max_m, bits);
            const std::string text = fig_format == "json" ? figure_json(fig_which, rows) : figure_csv(fig_which, rows);
            if (fig_out.empty()) {
                out << text;
            } else {
                std::ofstream file(fig_out, std::ios::binary);
                if (file) file << text;
                if (!file) throw Error("cannot write " + fig_out);
                out << "wrote " << rows.size() << " rows to " << fig_out << '\n';
            }
            return 0;
        }

        if (gamma_cmd->parsed()) {
            const gamma::GammaProfile p = gamma::big_g(gamma_m);
            OutputRecord rec;
            rec.provenance = "closed-form";
            rec.inputs["m"] = gamma_m;
            rec.results["gamma_star"] = p.gamma_star;
            rec.results["G"] = p.G;
            rec.results["log_G"] = p.log_G;
            rec.results["G_over_m_factorial"] = std::exp(p.log_G_over_m_fact);
            rec.results["ratio_separate_exponential"] = bounds::ratio_separate_exponential(gamma_m);
            const double scale = gamma::g_scale(gamma_m, p.gamma_star);
            rec.checks.push_back(check_le("|g(m, gamma*)| / scale",
                                          std::abs(gamma::g(gamma_m, p.gamma_star)) / scale, 1e-9));
            rec.checks.push_back(check_le("|ln G - ln(gamma* Gamma(m, gamma*))|",
                                          std::abs(p.log_G - p.log_G_via_gamma), 1e-9));
            rec.checks.push_back(check_le("G(m) / m!", std::exp(p.log_G_over_m_fact), 1.0));
            return emit(std::move(rec));
        }

        if (dual_cmd->parsed()) {
            OutputRecord rec;
            rec.provenance = "quadrature";
            duals::FeasibilityReport rep;
            double objective_tol = 1e-3;
            double derivative_tol = 1e-6;
            if (dual_setting == "uniform") {
                const int grid = dual_grid > 0 ? dual_grid : 200;
                rec.inputs["setting"] = "uniform";
                rec.inputs["m"] = dual_m;
                rec.inputs["grid"] = grid;
                rep = duals::verify_uniform_dual(dual_m, grid);
                if (dual_m >= 3) objective_tol = 5e-3;
            } else {
                require_rates(dual_rates);
                duals::ExponentialGridSpec spec;
                if (dual_grid > 0) spec.points_per_axis = dual_grid;
                spec.w_max = dual_w_max;
                spec.qmc_points = dual_qmc;
                rec.inputs["setting"] = "exp";
                rec.inputs["lambdas"] = rates_json(dual_rates);
                rec.inputs["grid"] = spec.points_per_axis;
                rec.inputs["w_max"] = spec.w_max;
                rec.inputs["qmc_points"] = spec.qmc_points;
                rep = duals::verify_exponential_dual(dual_rates, spec);
                if (dual_rates.size() >= 3) objective_tol = 5e-3;
                derivative_tol = 1e-9;
            }
            rec.results["objective_numeric"] = rep.objective_numeric;
            rec.results["objective_closed_form"] = rep.objective_closed_form;
            rec.results["relative_gap"] = rep.relative_gap;
            rec.results["max_boundary_residual"] = rep.max_boundary_residual;
            rec.results["max_derivative_residual"] = rep.max_derivative_residual;
            rec.results["max_analytic_gap"] = rep.max_analytic_gap;
            rec.results["derivative_violations"] = rep.derivative_violations;
            rec.results["cells_checked"] = rep.cells_checked;
            rec.results["cells_skipped_at_kinks"] = rep.cells_skipped_at_kinks;
            rec.results["truncation_tail_bound"] = rep.truncation_tail_bound;
            rec.results["integration_method"] = rep.integration_method;
            rec.results["integration_points"] = rep.integration_points;
            rec.checks.push_back(check_le("derivative violations",
                                          static_cast<double>(rep.derivative_violations), 0.0));
            rec.checks.push_back(check_le("max derivative residual", rep.max_derivative_residual, derivative_tol));
            rec.checks.push_back(check_le("max boundary residual", rep.max_boundary_residual, 1e-12));
            rec.checks.push_back(check_le("objective relative gap", rep.relative_gap, objective_tol));
            return emit(std::move(rec));
        }

        if (sim_cmd->parsed()) {
            const bool exp_prior = sim_prior.empty() ? !sim_rates.empty() || sim_mech == "proportional"
                                                     : sim_prior == "exp";
            if (sim_mech == "proportional" && !exp_prior)
                throw UsageError("the proportional mechanism needs an exponential prior");
            OutputRecord rec;
            rec.provenance = "monte-carlo";
            rec.seed = sim_seed;
            rec.inputs["mechanism"] = sim_mech;
            std::optional<ProductPrior> prior;
            if (exp_prior) {
                require_rates(sim_rates);
                prior = ProductPrior::exponential(sim_rates);
                rec.inputs["prior"] = "exp";
                rec.inputs["lambdas"] = rates_json(sim_rates);
            } else {
                if (sim_m < 1) throw UsageError("a uniform prior needs --m");
                prior = ProductPrior::uniform_iid(sim_m);
                rec.inputs["prior"] = "uniform";
                rec.inputs["m"] = sim_m;
            }
            rec.inputs["n"] = sim_n;

            std::optional<Mechanism> mech;
            std::optional<double> closed;
            if (sim_mech == "proportional") {
                mech = proportional(sim_rates);
                closed = proportional_revenue_closed_form(sim_rates);
            } else if (sim_mech == "separate") {
                std::vector<double> prices = sim_prices;
                if (prices.empty())
                    for (const Prior& f : prior->factors()) prices.push_back(myerson_price(f).price);
                if (prices.size() != prior->items()) throw UsageError("--prices needs one price per item");
                double total = 0.0;
                for (std::size_t j = 0; j < prices.size(); ++j)
                    total += prices[j] * (1.0 - (*prior)[j].cdf(prices[j]));
                closed = total;
                rec.inputs["prices"] = rates_json(prices);
                mech = Mechanism::separate(std::move(prices));
            } else {
                double price = sim_price;
                if (price < 0.0) {
                    const std::vector<double> rates = exp_prior ? prior->rates() : std::vector<double>{};
                    if (!exp_prior)
                        price = brev_uniform(static_cast<int>(prior->items()), bits).price;
                    else if (std::adjacent_find(rates.begin(), rates.end(), std::not_equal_to<>()) == rates.end())
                        price = gamma::gamma_star(static_cast<int>(rates.size())) / rates[0];
                    else
                        throw UsageError("bundle pricing with unequal rates needs --price");
                }
                rec.inputs["price"] = price;
                closed = bundle_revenue(*prior, price, bits);
                mech = Mechanism::full_bundle(prior->items(), price);
            }
            const RevenueEstimate est = simulate_revenue(*mech, *prior, sim_n, sim_seed);
            rec.results["mean"] = est.mean;
            rec.results["std_err"] = est.std_err;
            if (closed) {
                rec.results["closed_form"] = *closed;
                const double z = est.std_err > 0.0 ? (est.mean - *closed) / est.std_err : 0.0;
                rec.results["z_score"] = z;
                rec.checks.push_back(check_le("|mean - closed_form| / std_err", std::abs(z), 3.0));
            }
            return emit(std::move(rec));
        }

        if (lp_cmd->parsed()) {
            const bool exp_prior = lp_prior.empty() ? !lp_rates.empty() : lp_prior == "exp";
            OutputRecord rec;
            rec.provenance = "lp";
            std::optional<ProductPrior> prior;
            double bound = 0.0;
            if (exp_prior) {
                require_rates(lp_rates);
                prior = ProductPrior::exponential(lp_rates);
                bound = bounds::exponential_upper_bound(lp_rates);
                rec.inputs["prior"] = "exp";
                rec.inputs["lambdas"] = rates_json(lp_rates);
                rec.inputs["quantile"] = lp_q;
            } else {
                prior = ProductPrior::uniform_iid(lp_m);
                bound = bounds::uniform_upper_bound(lp_m);
                rec.inputs["prior"] = "uniform";
                rec.inputs["m"] = lp_m;
            }
            rec.inputs["n"] = lp_n;
            const lp::LpInstance inst = lp::build_lp(*prior, lp_n, lp_q);
            const lp::LpSolution sol = lp::solve_lp(inst);
            const lp::LpAudit aud = lp::audit(inst, sol);
            rec.results["value"] = sol.value;
            rec.results["status"] = sol.status == lp::LpStatus::Optimal ? "optimal" : "iteration-limit";
            rec.results["pivots"] = sol.pivots;
            rec.results["constraints"] = sol.constraints;
            rec.results["grid_points"] = inst.size();
            rec.results["closed_form_bound"] = bound;
            rec.results["max_ic_violation"] = aud.max_ic_violation;
            rec.results["max_ir_violation"] = aud.max_ir_violation;
            rec.results["max_range_violation"] = aud.max_range_violation;
            rec.checks.push_back(check_le("iteration limit reached",
                                          sol.status == lp::LpStatus::Optimal ? 0.0 : 1.0, 0.0));
            rec.checks.push_back(check_le("max IC violation", aud.max_ic_violation, 1e-8));
            rec.checks.push_back(check_le("max IR violation", aud.max_ir_violation, 1e-8));
            rec.checks.push_back(check_le("max allocation range violation", aud.max_range_violation, 1e-8));
            rec.checks.push_back(check_le("value - (bound + 0.02)", sol.value - bound - 0.02, 0.0));
            return emit(std::move(rec));
        }
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const InvalidArgument& e) {
        err << "invalid argument: " << e.what() << '\n';
        return 2;
    } catch (const PrecisionInsufficient& e) {
        err << "precision insufficient: " << e.what()
            << "; --precision-bits overrides the default\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 3;
    }
    return 2;
}

}  // namespace revbound::cli
