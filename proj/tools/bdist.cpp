#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdist/bdist.hpp"

// Command-line front end: pmf / sample / fit / table / dispersion / figure.
// Series output is TSV; fit results are JSON. Exit codes: 0 success,
// 1 usage error, 2 data error, 3 numerical failure.

namespace {

using nlohmann::json;

struct ParentFlags {
    std::string parent = "fixed";
    long long n = 10;
    double mu0 = 10.0;
    double r3 = 0.5;
    double size = 1.0;
    double prob = 0.5;

    void attach(CLI::App* cmd) {
        cmd->add_option("--parent", parent, "parent family: fixed, binomial, poisson, negbin")
            ->check(CLI::IsMember({"fixed", "binomial", "poisson", "negbin"}));
        cmd->add_option("--n", n, "fixed value of N, or binomial trial count");
        cmd->add_option("--mu0", mu0, "Poisson parent mean");
        cmd->add_option("--r3", r3, "binomial parent success probability");
        cmd->add_option("--size", size, "negative binomial size");
        cmd->add_option("--prob", prob, "negative binomial success probability");
    }

    bdist::ParentDist build() const {
        if (parent == "fixed") return bdist::ParentDist::fixed(n);
        if (parent == "binomial") return bdist::ParentDist::binomial(r3, n);
        if (parent == "poisson") return bdist::ParentDist::poisson(mu0);
        return bdist::ParentDist::negbin(size, prob);
    }
};

void emit_pmf_tsv(const bdist::PmfVector& v, long long max_i) {
    const long long top =
        max_i >= 0 ? std::min<long long>(max_i, (long long)v.probs.size() - 1)
                   : (long long)v.probs.size() - 1;
    for (long long i = 0; i <= top; ++i)
        std::printf("%lld\t%.17g\n", i, v.probs[std::size_t(i)]);
}

json pmf_to_json(const bdist::PmfVector& v) {
    json out;
    out["probs"] = v.probs;
    out["truncation_mass"] = v.truncation_mass;
    out["mean"] = v.mean();
    out["variance"] = v.variance();
    return out;
}

int run_pmf(const ParentFlags& parent, double r1, double r2, long long max_i,
            const std::string& format) {
    const bdist::BDistSpec spec(bdist::ChainParams(r1, r2), parent.build());
    const bdist::PmfVector v = bdist::pmf(spec);
    if (format == "json")
        std::cout << pmf_to_json(v).dump(2) << "\n";
    else
        emit_pmf_tsv(v, max_i);
    return 0;
}

int run_sample(const ParentFlags& parent, double r1, double r2, std::uint64_t seed,
               long long draws) {
    const bdist::BDistSpec spec(bdist::ChainParams(r1, r2), parent.build());
    const bdist::SampleBatch batch = bdist::sample_batch(spec, std::size_t(draws), seed);
    for (long long c : batch.counts) std::printf("%lld\n", c);
    return 0;
}

int run_fit(const std::string& data_path, const std::string& response,
            const std::string& covariates, std::optional<double> fix_r1,
            std::optional<double> fix_r2) {
    std::vector<std::string> cov_names;
    std::string token;
    for (char ch : covariates) {
        if (ch == ',') {
            if (!token.empty()) cov_names.push_back(token);
            token.clear();
        } else {
            token += ch;
        }
    }
    if (!token.empty()) cov_names.push_back(token);

    const bdist::Dataset data = bdist::ingest_csv(data_path, response, cov_names);
    bdist::FitOptions options;
    options.fix_r1 = fix_r1;
    options.fix_r2 = fix_r2;
    const bdist::FitResult res = bdist::fit(data, options);

    json out;
    out["alpha"] = res.model.alpha;
    out["beta"] = res.model.beta;
    out["covariates"] = cov_names;
    out["r1"] = res.model.r1;
    out["r2"] = res.model.r2;
    out["r1_fixed"] = res.model.r1_fixed;
    out["r2_fixed"] = res.model.r2_fixed;
    out["se"] = res.se;
    out["se_valid"] = res.se_valid;
    out["neg_loglik"] = res.neg_loglik;
    out["aic"] = res.aic;
    out["converged"] = res.converged;
    out["iterations"] = res.iterations;
    out["floored"] = res.floored;
    out["n_obs"] = data.size();
    std::cout << out.dump(2) << "\n";
    return res.converged ? 0 : 3;
}

int run_table(int n) {
    const std::vector<bdist::SymbolicPoly> polys = bdist::symbolic_pmf(n);
    for (std::size_t i = 0; i < polys.size(); ++i)
        std::printf("p%zu\t%s\n", i, bdist::render(polys[i]).c_str());
    return 0;
}

int run_dispersion(double mean_value, const std::string& family, int grid,
                   const std::string& format) {
    const bdist::DispersionFamily fam = family == "compoisson"
                                            ? bdist::DispersionFamily::ComPoisson
                                            : bdist::DispersionFamily::BPoisson;
    const bdist::DispersionBounds b = bdist::dispersion_bounds(mean_value, fam, grid);
    if (format == "json") {
        json out;
        out["mean"] = mean_value;
        out["family"] = family;
        out["min_cd"] = b.min_cd;
        out["max_cd"] = b.max_cd;
        std::cout << out.dump(2) << "\n";
    } else {
        std::printf("%.17g\t%.17g\n", b.min_cd, b.max_cd);
    }
    return 0;
}

const std::vector<std::pair<double, double>> kFigureChains = {
    {0.5, 0.5}, {0.2, 0.2}, {0.8, 0.8}};

int run_figure(int which) {
    if (which == 1 || which == 3) {
        std::vector<bdist::PmfVector> series;
        std::size_t width = 0;
        for (const auto& [r1, r2] : kFigureChains) {
            const bdist::ParentDist parent =
                which == 1 ? bdist::ParentDist::fixed(20)
                           : bdist::ParentDist::poisson(10.0 * (r1 + r2) / r1);
            series.push_back(bdist::pmf(
                bdist::BDistSpec(bdist::ChainParams(r1, r2), parent), 1e-10));
            width = std::max(width, series.back().probs.size());
        }
        std::printf("i\tp_r5_r5\tp_r2_r2\tp_r8_r8\n");
        for (std::size_t i = 0; i < width; ++i) {
            std::printf("%zu", i);
            for (const bdist::PmfVector& v : series)
                std::printf("\t%.17g", i < v.probs.size() ? v.probs[i] : 0.0);
            std::printf("\n");
        }
        return 0;
    }
    // dispersion-bound curves over the mean range
    std::printf("mean\tbp_min\tbp_max\tcp_min\tcp_max\n");
    for (double m : {0.5, 1.0, 1.456, 2.0, 3.0, 5.0, 8.0, 12.0, 16.0, 20.0}) {
        const bdist::DispersionBounds bp =
            bdist::dispersion_bounds(m, bdist::DispersionFamily::BPoisson, 15);
        const bdist::DispersionBounds cp =
            bdist::dispersion_bounds(m, bdist::DispersionFamily::ComPoisson, 15);
        std::printf("%.6g\t%.6g\t%.6g\t%.6g\t%.6g\n", m, bp.min_cd, bp.max_cd, cp.min_cd,
                    cp.max_cd);
        std::fflush(stdout);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"b-distribution toolkit: pmf evaluation, sampling, fitting"};
    app.require_subcommand(1);

    double r1 = 0.5, r2 = 0.5;
    long long max_i = -1;
    std::string format = "tsv";
    std::uint64_t seed = 1;
    long long draws = 100;
    std::string data_path, response, covariates;
    double fix_r1_value = 1.0, fix_r2_value = 0.5;
    int table_n = 2;
    double mean_value = 1.0;
    std::string family = "bpoisson";
    int grid = 60;
    int which = 1;

    CLI::App* pmf_cmd = app.add_subcommand("pmf", "emit the probability mass function");
    ParentFlags pmf_parent;
    pmf_parent.attach(pmf_cmd);
    pmf_cmd->add_option("--r1", r1, "chain probability r1")->required();
    pmf_cmd->add_option("--r2", r2, "chain probability r2")->required();
    pmf_cmd->add_option("--max", max_i, "highest index to emit");
    pmf_cmd->add_option("--format", format)->check(CLI::IsMember({"tsv", "json"}));

    CLI::App* sample_cmd = app.add_subcommand("sample", "draw random counts");
    ParentFlags sample_parent;
    sample_parent.attach(sample_cmd);
    sample_cmd->add_option("--r1", r1)->required();
    sample_cmd->add_option("--r2", r2)->required();
    sample_cmd->add_option("--seed", seed, "random seed");
    sample_cmd->add_option("--draws", draws, "number of draws")->check(CLI::PositiveNumber);

    CLI::App* fit_cmd = app.add_subcommand("fit", "fit the count regression by ML");
    fit_cmd->add_option("--data", data_path, "CSV file")->required();
    fit_cmd->add_option("--response", response, "response column")->required();
    fit_cmd->add_option("--covariates", covariates, "comma-separated covariate columns");
    CLI::Option* fix_r1_opt = fit_cmd->add_option("--fix-r1", fix_r1_value, "hold r1 fixed");
    CLI::Option* fix_r2_opt = fit_cmd->add_option("--fix-r2", fix_r2_value, "hold r2 fixed");

    CLI::App* table_cmd = app.add_subcommand("table", "emit the symbolic fixed-N table");
    table_cmd->add_option("--N", table_n, "fixed N")->required()->check(CLI::Range(0, 12));

    CLI::App* disp_cmd = app.add_subcommand("dispersion", "dispersion bounds at a mean");
    disp_cmd->add_option("--mean", mean_value, "target mean")->required();
    disp_cmd->add_option("--family", family)
        ->check(CLI::IsMember({"bpoisson", "compoisson"}));
    disp_cmd->add_option("--grid", grid, "grid points per axis")->check(CLI::PositiveNumber);
    disp_cmd->add_option("--format", format)->check(CLI::IsMember({"tsv", "json"}));

    CLI::App* figure_cmd = app.add_subcommand("figure", "emit plot-ready series");
    figure_cmd->add_option("--which", which, "figure number")->required()
        ->check(CLI::Range(1, 3));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (pmf_cmd->parsed()) return run_pmf(pmf_parent, r1, r2, max_i, format);
        if (sample_cmd->parsed()) return run_sample(sample_parent, r1, r2, seed, draws);
        if (fit_cmd->parsed())
            return run_fit(data_path, response, covariates,
                           fix_r1_opt->count() ? std::optional<double>(fix_r1_value)
                                               : std::nullopt,
                           fix_r2_opt->count() ? std::optional<double>(fix_r2_value)
                                               : std::nullopt);
        if (table_cmd->parsed()) return run_table(table_n);
        if (disp_cmd->parsed()) return run_dispersion(mean_value, family, grid, format);
        if (figure_cmd->parsed()) return run_figure(which);
    } catch (const std::domain_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::overflow_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::length_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::runtime_error& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
