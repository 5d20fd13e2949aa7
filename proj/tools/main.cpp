#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "primeseries/dirichlet.hpp"
#include "primeseries/harness.hpp"
#include "primeseries/multiplicative.hpp"
#include "primeseries/noise.hpp"
#include "primeseries/primes.hpp"

#include "config.hpp"
#include "report.hpp"

namespace primeseries::cli {
namespace {

using nlohmann::json;

// Collects string-valued flags for one subcommand and overlays them on the
// config file after parsing, so flags override file values.
class FlagSet {
public:
    explicit FlagSet(CLI::App* cmd) : cmd_(cmd) {
        cmd->add_option("--config", config_path_, "key=value configuration file");
    }

    void bind(const std::string& flag, const std::string& key, const std::string& help) {
        auto it = storage_.emplace(key, std::string{}).first;
        cmd_->add_option(flag, it->second, help);
        bound_.emplace_back(flag, key);
    }

    Config resolve() const {
        Config config;
        if (!config_path_.empty()) config = Config::from_file(config_path_);
        for (const auto& [flag, key] : bound_)
            if (cmd_->count(flag) > 0) config.set(key, storage_.at(key));
        return config;
    }

private:
    CLI::App* cmd_;
    std::string config_path_;
    std::map<std::string, std::string> storage_;
    std::vector<std::pair<std::string, std::string>> bound_;
};

int to_int(const std::string& key, std::int64_t value) {
    if (value < INT32_MIN || value > INT32_MAX)
        throw ConfigError(key + ": out of range: " + std::to_string(value));
    return static_cast<int>(value);
}

void check_format(const std::string& format, bool csv_supported = true) {
    if (format != "json" && format != "csv" && format != "both")
        throw ConfigError("format: expected json, csv, or both, got '" + format + "'");
    if (!csv_supported && format != "json")
        throw ConfigError("format: only json is available for this command");
}

void emit(const json& report, const std::string& command, const std::string& out_dir,
          const std::string& format, const std::vector<std::string>& csv_header,
          const std::vector<std::vector<std::string>>& csv_rows) {
    if (format == "both" && out_dir.empty())
        throw ConfigError("format: both requires an out directory");
    if (format == "json" || format == "both") emit_json(report, command, out_dir, true);
    if (format == "csv" || format == "both") emit_csv(csv_header, csv_rows, command, out_dir);
    if (format == "csv" && !out_dir.empty()) emit_json(report, command, out_dir, false);
}

PathMode parse_mode(const std::string& text) {
    if (text == "power") return PathMode::power;
    if (text == "exponential") return PathMode::exponential;
    throw ConfigError("mode: expected power or exponential, got '" + text + "'");
}

LilBranch parse_branch(const std::string& text) {
    if (text == "minus") return LilBranch::minus;
    if (text == "plus") return LilBranch::plus;
    throw ConfigError("branch: expected minus or plus, got '" + text + "'");
}

NoiseModel parse_model(Resolver& r, const std::string& default_kind) {
    const std::string kind = r.text("noise.kind", default_kind);
    if (kind == "two_point")
        return NoiseModel::two_point(r.required_number("noise.two_point.a"), r.required_number("noise.two_point.b"),
                                     r.required_number("noise.two_point.q"));
    const double sigma2 = r.number("noise.sigma2", "1");
    if (kind == "rademacher") return NoiseModel::rademacher(sigma2);
    if (kind == "gaussian") return NoiseModel::gaussian(sigma2);
    if (kind == "centered_uniform") return NoiseModel::centered_uniform(sigma2);
    throw ConfigError("model.kind: unknown model '" + kind + "'");
}

// Loads the cache when it covers the requested limit; sieves and rewrites it
// otherwise.  An empty path always sieves.
PrimeTable acquire_table(std::uint64_t limit, const std::string& cache) {
    if (!cache.empty()) {
        try {
            PrimeTable table = read_prime_cache(cache);
            if (table.limit() >= limit) return table;
        } catch (const std::exception&) {
        }
        PrimeTable table = PrimeTable::sieve(limit);
        write_prime_cache(table, cache);
        return table;
    }
    return PrimeTable::sieve(limit);
}

int run_variance(const Config& config) {
    Resolver r(config);
    const std::vector<double> s_list = r.required_number_list("s");
    const std::uint64_t cutoff = r.counter("cutoff", "1e8");
    const double sigma2 = r.number("sigma2", "1");
    const double band_lo = r.number("band.lo", "0.85");
    const double band_hi = r.number("band.hi", "1.15");
    std::string cache;
    r.optional_text("cache", cache);
    const std::string out_dir = r.text("out", "");
    const std::string format = r.text("format", "json");
    r.reject_unknown();
    check_format(format);

    const PrimeTable table = acquire_table(cutoff, cache);

    json results = json::array();
    std::vector<std::vector<std::string>> csv;
    bool pass = true;
    for (double s : s_list) {
        const VarianceBreakdown b = g_hybrid(table, s, cutoff, sigma2);
        const bool in_band = b.ratio >= band_lo && b.ratio <= band_hi;
        pass = pass && in_band;
        results.push_back({{"s", s},
                           {"partial", b.partial},
                           {"tail_estimate", b.tail_estimate},
                           {"total", b.total},
                           {"asymptote", b.asymptote},
                           {"ratio", b.ratio},
                           {"in_band", in_band}});
        csv.push_back({csv_number(s), csv_number(b.partial), csv_number(b.tail_estimate),
                       csv_number(b.total), csv_number(b.asymptote), csv_number(b.ratio)});
    }

    json report = make_report("variance", r.echo());
    report["results"] = results;
    report["pass"] = pass;
    emit(report, "variance", out_dir, format,
         {"s", "partial", "tail_estimate", "total", "asymptote", "ratio"}, csv);
    return pass ? 0 : 1;
}

json square_matrix(const std::vector<double>& flat, std::size_t m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m; ++j) row.push_back(flat[i * m + j]);
        rows.push_back(std::move(row));
    }
    return rows;
}

int run_fclt(const Config& config) {
    Resolver r(config);
    ExperimentConfig ec;
    ec.replicas = to_int("replicas", r.integer("replicas", "2000"));
    ec.cutoff_P = r.counter("cutoff", "1e7");
    ec.mode = parse_mode(r.text("mode", "exponential"));
    ec.scale = r.number("scale", "10");
    ec.grid = r.number_list("grid", "0.25,0.5,1.0");
    ec.model = parse_model(r, "rademacher");
    ec.master_seed = r.required_counter("seed");
    ec.tolerance_multiplier = r.number("tolerance", "4");
    ec.threads = to_int("threads", r.integer("threads", "0"));
    std::string cache;
    r.optional_text("cache", cache);
    const std::string out_dir = r.text("out", "");
    const std::string format = r.text("format", "json");
    r.reject_unknown();
    check_format(format);

    const PrimeTable table = acquire_table(ec.cutoff_P, cache);
    const FcltReport rep = run_fclt_experiment(table, ec);
    const std::size_t m = rep.grid.size();

    json report = make_report("fclt", r.echo());
    report["results"] = {{"grid", rep.grid},
                         {"shifts", rep.shifts},
                         {"replicas", rep.replicas},
                         {"mean", rep.mean},
                         {"variance", rep.variance},
                         {"skewness", rep.skewness},
                         {"excess_kurtosis", rep.excess_kurtosis},
                         {"empirical_cov", square_matrix(rep.empirical_cov, m)},
                         {"oracle_cov", square_matrix(rep.oracle_cov, m)},
                         {"cov_standard_error", square_matrix(rep.cov_standard_error, m)},
                         {"empirical_psd", covariance_psd(rep.empirical_cov, m, 1e-12)},
                         {"ks_statistic", rep.ks_statistic},
                         {"ks_threshold", rep.ks_threshold},
                         {"covariance_pass", rep.covariance_pass},
                         {"marginals_pass", rep.marginals_pass}};
    report["pass"] = rep.pass;

    std::vector<std::vector<std::string>> csv;
    for (std::size_t i = 0; i < m; ++i)
        csv.push_back({csv_number(rep.grid[i]), csv_number(rep.shifts[i]),
                       csv_number(rep.mean[i]), csv_number(rep.variance[i]),
                       csv_number(rep.skewness[i]), csv_number(rep.excess_kurtosis[i]),
                       csv_number(rep.ks_statistic[i])});
    emit(report, "fclt", out_dir, format,
         {"t", "shift", "mean", "variance", "skewness", "excess_kurtosis", "ks_statistic"}, csv);
    return rep.pass ? 0 : 1;
}

int run_lil(const Config& config) {
    Resolver r(config);
    const double gamma = r.number("gamma", "0.5");
    const LilBranch branch = parse_branch(r.text("branch", "minus"));
    const auto [n_lo, n_hi] = parse_range(r.text("n", "1..12"), "n");
    const std::uint64_t cutoff = r.counter("cutoff", "1e6");
    const std::uint64_t seed = r.required_counter("seed");
    const NoiseModel model = parse_model(r, "rademacher");
    const double envelope = r.number("envelope", "1.5");
    const std::string out_dir = r.text("out", "");
    const std::string format = r.text("format", "json");
    r.reject_unknown();
    check_format(format);

    const PrimeTable table = PrimeTable::sieve(cutoff);
    LilReport rep =
        run_lil_trace(table, SeedSpec{seed, 0}, model, cutoff, gamma, branch, n_lo, n_hi);
    rep.envelope = envelope;

    json rows = json::array();
    std::vector<std::vector<std::string>> csv;
    bool pass = true;
    for (const LilRow& row : rep.rows) {
        json entry{{"n", row.n}, {"s_n", row.s_n}, {"excluded", row.excluded}};
        if (row.excluded) {
            entry["note"] = row.note;
            csv.push_back({std::to_string(row.n), csv_number(row.s_n), "1", "", "", ""});
        } else {
            entry["g_truncated"] = row.g_truncated;
            entry["normalizer"] = row.normalizer;
            entry["normalized"] = row.normalized;
            entry["running_max"] = row.running_max;
            entry["running_min"] = row.running_min;
            pass = pass && std::abs(row.normalized) <= envelope;
            csv.push_back({std::to_string(row.n), csv_number(row.s_n), "0",
                           csv_number(row.normalized), csv_number(row.running_max),
                           csv_number(row.running_min)});
        }
        rows.push_back(std::move(entry));
    }

    json report = make_report("lil", r.echo());
    report["results"] = {{"envelope", rep.envelope}, {"rows", rows}};
    report["pass"] = pass;
    emit(report, "lil", out_dir, format,
         {"n", "s_n", "excluded", "normalized", "running_max", "running_min"}, csv);
    return pass ? 0 : 1;
}

int run_euler(const Config& config) {
    Resolver r(config);
    const std::uint64_t P = r.counter("P", "13");
    const int k = to_int("k", r.integer("k", "3"));
    const std::vector<double> s_list = r.number_list("s", "0.01,0.5,2");
    std::string seed_text, seeds_text;
    const bool has_seed = r.optional_text("seed", seed_text);
    const bool has_seeds = r.optional_text("seeds", seeds_text);
    if (!has_seed && !has_seeds)
        throw ConfigError("missing required setting: seed (or a seeds count)");
    const std::uint64_t base = has_seed ? parse_counter(seed_text, "seed") : 1;
    const std::uint64_t count = has_seeds ? parse_counter(seeds_text, "seeds") : 1;
    if (count == 0) throw ConfigError("seeds: must be positive");
    const double tol = r.number("tol", "1e-12");
    const std::string out_dir = r.text("out", "");
    const std::string format = r.text("format", "json");
    r.reject_unknown();
    check_format(format);
    if (k < 2) throw ConfigError("k: must be >= 2");

    const PrimeTable table = PrimeTable::sieve(std::max<std::uint64_t>(P, 2));

    json rows = json::array();
    std::vector<std::vector<std::string>> csv;
    double max_gap = 0.0;
    int flagged = 0;
    for (std::uint64_t seed = base; seed < base + count; ++seed) {
        for (double s : s_list) {
            const SeedSpec spec{seed, 0};
            const EulerProduct ep = euler_product(table, spec, s, P, static_cast<unsigned>(k));
            const double sum = smooth_expansion_sum(table, spec, s, P, static_cast<unsigned>(k));
            const double gap = std::abs(ep.value - sum) / std::max(1e-300, std::abs(sum));
            max_gap = std::max(max_gap, gap);
            json entry{{"seed", seed},
                       {"s", s},
                       {"product", ep.value},
                       {"expansion_sum", sum},
                       {"relative_gap", gap}};
            if (ep.nonpositive_factor_p) {
                entry["nonpositive_factor_p"] = *ep.nonpositive_factor_p;
                ++flagged;
            }
            rows.push_back(std::move(entry));
            csv.push_back({std::to_string(seed), csv_number(s), csv_number(ep.value),
                           csv_number(sum), csv_number(gap)});
        }
    }
    const bool pass = max_gap <= tol;

    json report = make_report("euler", r.echo());
    report["results"] = {{"rows", rows},
                         {"max_relative_gap", max_gap},
                         {"flagged_factors", flagged}};
    report["pass"] = pass;
    emit(report, "euler", out_dir, format, {"seed", "s", "product", "expansion_sum", "relative_gap"},
         csv);
    return pass ? 0 : 1;
}

int run_decompose(const Config& config) {
    Resolver r(config);
    const int k = to_int("k", r.integer("k", "2"));
    const std::vector<double> s_list = r.number_list("s", "0.5");
    const std::uint64_t cutoff = r.counter("cutoff", "1e4");
    const std::uint64_t seed = r.required_counter("seed");
    const double tol = r.number("residual.tol", "1e-10");
    const std::string out_dir = r.text("out", "");
    const std::string format = r.text("format", "json");
    r.reject_unknown();
    check_format(format);
    if (k < 2) throw ConfigError("k: must be >= 2");

    const PrimeTable table = PrimeTable::sieve(cutoff);

    json rows = json::array();
    std::vector<std::vector<std::string>> csv;
    double max_residual = 0.0;
    bool pass = true;
    for (double s : s_list) {
        const DecompositionReport d =
            log_decomposition(table, SeedSpec{seed, 0}, s, cutoff, static_cast<unsigned>(k));
        const bool bound_ok = !d.has_bound || std::abs(d.remainder) <= d.bound;
        max_residual = std::max(max_residual, d.residual);
        pass = pass && d.residual <= tol && bound_ok;
        json entry{{"s", d.s},
                   {"cutoff", d.P},
                   {"k", d.k},
                   {"log_product", d.log_product},
                   {"prime_sum", d.prime_sum},
                   {"half_variance_sum", d.half_variance_sum},
                   {"remainder", d.remainder},
                   {"residual", d.residual}};
        if (d.has_bound) {
            entry["bound"] = d.bound;
            entry["bound_ok"] = bound_ok;
        }
        rows.push_back(std::move(entry));
        csv.push_back({csv_number(s), csv_number(d.log_product), csv_number(d.prime_sum),
                       csv_number(d.half_variance_sum), csv_number(d.remainder),
                       csv_number(d.residual)});
    }

    json report = make_report("decompose", r.echo());
    report["results"] = {{"rows", rows}, {"max_residual", max_residual}};
    report["pass"] = pass;
    emit(report, "decompose", out_dir, format,
         {"s", "log_product", "prime_sum", "half_variance_sum", "remainder", "residual"}, csv);
    return pass ? 0 : 1;
}

int run_lindeberg(const Config& config) {
    Resolver r(config);
    const NoiseModel model = parse_model(r, "gaussian");
    const double eps = r.number("eps", "0.5");
    const std::uint64_t cutoff = r.counter("cutoff", "1e6");
    const std::vector<double> shifts = r.number_list("shifts", "0.1,0.01,0.001");
    const std::vector<double> norms = r.number_list("norms", "10,100,1000");
    const std::string out_dir = r.text("out", "");
    const std::string format = r.text("format", "json");
    r.reject_unknown();
    check_format(format);

    const PrimeTable table = PrimeTable::sieve(cutoff);

    std::vector<std::vector<double>> profiles;
    for (double norm : norms)
        profiles.push_back(lindeberg_profile(table, model, shifts, eps, cutoff, norm));

    bool pass = true;
    for (std::size_t j = 0; j < shifts.size(); ++j)
        for (std::size_t i = 1; i < norms.size(); ++i)
            if (profiles[i][j] > profiles[i - 1][j]) pass = false;

    json report = make_report("lindeberg", r.echo());
    report["results"] = {{"shifts", shifts}, {"norms", norms}, {"profiles", profiles}};
    report["pass"] = pass;

    std::vector<std::string> header{"norm"};
    for (double a : shifts) header.push_back("shift_" + csv_number(a));
    std::vector<std::vector<std::string>> csv;
    for (std::size_t i = 0; i < norms.size(); ++i) {
        std::vector<std::string> row{csv_number(norms[i])};
        for (double v : profiles[i]) row.push_back(csv_number(v));
        csv.push_back(std::move(row));
    }
    emit(report, "lindeberg", out_dir, format, header, csv);
    return pass ? 0 : 1;
}

int run_sieve(const Config& config) {
    Resolver r(config);
    const std::uint64_t cutoff = r.required_counter("cutoff");
    std::string cache;
    const bool has_cache = r.optional_text("cache", cache);
    const std::string out_dir = r.text("out", "");
    const std::string format = r.text("format", "json");
    r.reject_unknown();
    check_format(format, false);

    const PrimeTable table = PrimeTable::sieve(cutoff);

    json report = make_report("sieve", r.echo());
    json results{{"limit", table.limit()}, {"count", table.primes().size()}};
    if (!table.primes().empty()) results["largest"] = table.primes().back();
    bool pass = true;
    if (has_cache) {
        write_prime_cache(table, cache);
        const PrimeTable back = read_prime_cache(cache);
        pass = back.limit() == table.limit() && back.primes() == table.primes();
        results["cache"] = cache;
        results["cache_verified"] = pass;
    }
    report["results"] = std::move(results);
    report["pass"] = pass;
    emit_json(report, "sieve", out_dir, true);
    return pass ? 0 : 1;
}

} // namespace
} // namespace primeseries::cli

int main(int argc, char** argv) {
    using namespace primeseries::cli;

    CLI::App app{"Simulation and verification lab for random Dirichlet series over primes"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "1.0.0");

    struct Command {
        std::string name;
        std::unique_ptr<FlagSet> flags;
        int (*run)(const Config&);
    };
    std::vector<Command> commands;

    auto add = [&](const std::string& name, const std::string& help, int (*run)(const Config&)) {
        CLI::App* cmd = app.add_subcommand(name, help);
        commands.push_back({name, std::make_unique<FlagSet>(cmd), run});
        return commands.back().flags.get();
    };

    {
        FlagSet* f = add("variance", "Truncated variance with prime-density tail vs log(1/s)",
                         run_variance);
        f->bind("--s", "s", "comma-separated shift list");
        f->bind("--cutoff", "cutoff", "prime cutoff P");
        f->bind("--sigma2", "sigma2", "noise variance");
        f->bind("--band-lo", "band.lo", "lower ratio band edge");
        f->bind("--band-hi", "band.hi", "upper ratio band edge");
        f->bind("--cache", "cache", "prime cache file, read or created");
        f->bind("--out", "out", "output directory");
        f->bind("--format", "format", "json, csv, or both");
    }
    {
        FlagSet* f = add("fclt", "Monte Carlo path statistics against the Brownian covariance", run_fclt);
        f->bind("--replicas", "replicas", "number of replicas");
        f->bind("--cutoff", "cutoff", "prime cutoff P");
        f->bind("--mode", "mode", "power or exponential time change");
        f->bind("--scale", "scale", "base s (power) or S (exponential)");
        f->bind("--grid", "grid", "comma-separated time grid, ascending");
        f->bind("--model", "noise.kind", "noise model");
        f->bind("--sigma2", "noise.sigma2", "noise variance");
        f->bind("--model-a", "noise.two_point.a", "two-point value a");
        f->bind("--model-b", "noise.two_point.b", "two-point value b");
        f->bind("--model-q", "noise.two_point.q", "two-point probability of a");
        f->bind("--seed", "seed", "master seed");
        f->bind("--tolerance", "tolerance", "covariance tolerance in standard errors");
        f->bind("--threads", "threads", "worker threads, 0 = hardware");
        f->bind("--cache", "cache", "prime cache file, read or created");
        f->bind("--out", "out", "output directory");
        f->bind("--format", "format", "json, csv, or both");
    }
    {
        FlagSet* f = add("lil", "Single-seed trace under the iterated-logarithm normalizer",
                            run_lil);
        f->bind("--gamma", "gamma", "sequence exponent in (0,1)");
        f->bind("--branch", "branch", "minus or plus");
        f->bind("--n", "n", "index range a..b");
        f->bind("--cutoff", "cutoff", "prime cutoff P");
        f->bind("--seed", "seed", "master seed");
        f->bind("--model", "noise.kind", "noise model");
        f->bind("--sigma2", "noise.sigma2", "noise variance");
        f->bind("--model-a", "noise.two_point.a", "two-point value a");
        f->bind("--model-b", "noise.two_point.b", "two-point value b");
        f->bind("--model-q", "noise.two_point.q", "two-point probability of a");
        f->bind("--envelope", "envelope", "pass band for normalized values");
        f->bind("--out", "out", "output directory");
        f->bind("--format", "format", "json, csv, or both");
    }
    {
        FlagSet* f = add("euler", "Euler product against the smooth expansion sum", run_euler);
        f->bind("--P", "P", "prime cutoff");
        f->bind("--k", "k", "k-free order");
        f->bind("--s", "s", "comma-separated shift list");
        f->bind("--seed", "seed", "first master seed");
        f->bind("--seeds", "seeds", "number of consecutive master seeds");
        f->bind("--tol", "tol", "relative gap tolerance");
        f->bind("--out", "out", "output directory");
        f->bind("--format", "format", "json, csv, or both");
    }
    {
        FlagSet* f = add("decompose", "Log decomposition of the Euler product with remainder",
                            run_decompose);
        f->bind("--k", "k", "k-free order");
        f->bind("--s", "s", "comma-separated shift list");
        f->bind("--cutoff", "cutoff", "prime cutoff P");
        f->bind("--seed", "seed", "master seed");
        f->bind("--residual-tol", "residual.tol", "identity residual tolerance");
        f->bind("--out", "out", "output directory");
        f->bind("--format", "format", "json, csv, or both");
    }
    {
        FlagSet* f = add("lindeberg", "Truncated second moment profile over norms", run_lindeberg);
        f->bind("--model", "noise.kind", "noise model");
        f->bind("--sigma2", "noise.sigma2", "noise variance");
        f->bind("--model-a", "noise.two_point.a", "two-point value a");
        f->bind("--model-b", "noise.two_point.b", "two-point value b");
        f->bind("--model-q", "noise.two_point.q", "two-point probability of a");
        f->bind("--eps", "eps", "truncation level");
        f->bind("--cutoff", "cutoff", "prime cutoff P");
        f->bind("--shifts", "shifts", "comma-separated shift list");
        f->bind("--norms", "norms", "comma-separated norm list");
        f->bind("--out", "out", "output directory");
        f->bind("--format", "format", "json, csv, or both");
    }
    {
        FlagSet* f = add("sieve", "Enumerate primes and optionally write the cache", run_sieve);
        f->bind("--cutoff", "cutoff", "sieve limit");
        f->bind("--cache", "cache", "cache file to write");
        f->bind("--out", "out", "output directory");
        f->bind("--format", "format", "json only");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        for (const auto& command : commands)
            if (app.got_subcommand(command.name)) return command.run(command.flags->resolve());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
