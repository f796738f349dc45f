// rslab: command-line laboratory for the Rankin-Selberg error term.
//
// Derived data flows through text caches under --cache-dir:
//   eigenform.txt    exact a(n)                  (tau)
//   rankin_ctable.txt  c_n at working precision  (coeffs, chained by hash)
//   constants.json   calibrated C and Z0         (constants, chained by hash)
// Downstream commands refuse stale caches (exit 2).  Exit codes: 0 ok,
// 2 validation/usage error, 3 internal inconsistency.

#include "rslab/arith.hpp"
#include "rslab/eigenform.hpp"
#include "rslab/errors.hpp"
#include "rslab/fileio.hpp"
#include "rslab/largevalue.hpp"
#include "rslab/mainterm.hpp"
#include "rslab/moments.hpp"
#include "rslab/parallel.hpp"
#include "rslab/quartic.hpp"
#include "rslab/rankin.hpp"
#include "rslab/real.hpp"
#include "rslab/voronoi.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace rslab;
using nlohmann::ordered_json;

struct GlobalConfig {
    std::string cache_dir = "cache";
    unsigned digits = 40;
    unsigned threads = 1;
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 12345;

    std::string eigen_path() const { return cache_dir + "/eigenform.txt"; }
    std::string ctable_path() const { return cache_dir + "/rankin_ctable.txt"; }
    std::string constants_path() const { return cache_dir + "/constants.json"; }
};

void emit(const GlobalConfig& cfg, const std::string& text) {
    if (cfg.out.empty() || cfg.out == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n')
            std::cout << "\n";
    } else {
        atomic_write_text(cfg.out, text);
    }
}

ordered_json report_header(const GlobalConfig& cfg) {
    ordered_json j;
    j["schema"] = "rml-report-v1";
    j["digits"] = cfg.digits;
    return j;
}

EigenformTable load_eigen(const GlobalConfig& cfg) {
    if (!file_exists(cfg.eigen_path()))
        throw ValidationError("missing eigenform cache " + cfg.eigen_path() +
                              "; run `rslab tau --nmax N` first");
    return read_eigenform_cache(cfg.eigen_path());
}

RankinTable load_ctable(const GlobalConfig& cfg) {
    if (!file_exists(cfg.ctable_path()))
        throw ValidationError("missing coefficient cache " + cfg.ctable_path() +
                              "; run `rslab coeffs --nmax N` first");
    if (!file_exists(cfg.eigen_path()))
        throw ValidationError("missing eigenform cache " + cfg.eigen_path() +
                              "; run `rslab tau --nmax N` first");
    return read_rankin_cache(cfg.ctable_path(), hash_file(cfg.eigen_path()));
}

MainTermConstants load_constants(const GlobalConfig& cfg) {
    if (!file_exists(cfg.constants_path()))
        throw ValidationError("missing constants cache " + cfg.constants_path() +
                              "; run `rslab constants --xcal X` first");
    MainTermConstants c = constants_from_json(read_text_file(cfg.constants_path()));
    if (c.table_hash != hash_file(cfg.ctable_path()))
        throw ValidationError("stale constants cache: coefficient table has changed; "
                              "rerun `rslab constants`");
    return c;
}

int run(int argc, char** argv) {
    GlobalConfig cfg;
    CLI::App app{"numerical laboratory for the Rankin-Selberg error term"};
    app.require_subcommand(1);
    app.add_option("--cache-dir", cfg.cache_dir, "cache directory")->capture_default_str();
    app.add_option("--digits", cfg.digits, "working precision (decimal digits, >= 30)")
        ->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker thread cap")->capture_default_str();
    app.add_option("--out", cfg.out, "output file (default stdout)");
    app.add_option("--format", cfg.format, "output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "seed for randomized probes")->capture_default_str();

    // tau
    std::size_t tau_nmax = 100000;
    std::string tau_method = "modular";
    auto* tau_cmd = app.add_subcommand("tau", "build/refresh the eigenform coefficient cache");
    tau_cmd->add_option("--nmax", tau_nmax, "table length")->required();
    tau_cmd->add_option("--method", tau_method, "reference or modular")
        ->check(CLI::IsMember({"reference", "modular"}));

    // coeffs
    std::size_t coeffs_nmax = 0;
    auto* coeffs_cmd = app.add_subcommand("coeffs", "build the Rankin coefficient cache");
    coeffs_cmd->add_option("--nmax", coeffs_nmax, "table length (default: eigenform cache length)");

    // constants
    double xcal = 0;
    std::size_t subtract_n = 10000;
    std::size_t calib_points = 2000;
    std::optional<std::string> const_C, const_Z0;
    auto* const_cmd = app.add_subcommand("constants", "calibrate and persist C and Z(0)");
    const_cmd->add_option("--xcal", xcal, "calibration scale X")->required();
    const_cmd->add_option("--subtract-n", subtract_n,
                          "subtract R_1(x;N) before fitting (0 disables)");
    const_cmd->add_option("--points", calib_points, "sample count");
    const_cmd->add_option("--const-C", const_C, "override C (skips calibration)");
    const_cmd->add_option("--const-Z0", const_Z0, "override Z0 (skips calibration)");

    // delta
    double d_from = 0, d_to = 0, d_step = 1;
    auto* delta_cmd = app.add_subcommand("delta", "emit (x, Delta(x), Delta_1(x)) rows");
    delta_cmd->add_option("--from", d_from)->required();
    delta_cmd->add_option("--to", d_to)->required();
    delta_cmd->add_option("--step", d_step)->required();

    // voronoi
    double v_T = 0;
    std::size_t v_N = 0, v_samples = 100;
    auto* vor_cmd = app.add_subcommand("voronoi", "truncated-expansion residual report");
    vor_cmd->add_option("--t", v_T)->required();
    vor_cmd->add_option("--n", v_N)->required();
    vor_cmd->add_option("--samples", v_samples);

    // series
    int s_k = 0, s_l = 0;
    std::uint64_t s_y = 0;
    std::string solutions_path;
    auto* series_cmd = app.add_subcommand("series", "truncated singular-series value");
    series_cmd->add_option("--k", s_k)->required();
    series_cmd->add_option("--l", s_l)->required();
    series_cmd->add_option("--y", s_y)->required();
    series_cmd->add_option("--solutions", solutions_path, "also write solution tuples (CSV)");

    // bk
    int bk_k = 0;
    std::uint64_t bk_y = 0;
    auto* bk_cmd = app.add_subcommand("bk", "moment constant B_k(c;y), both routes");
    bk_cmd->add_option("--k", bk_k)->required();
    bk_cmd->add_option("--y", bk_y)->required();

    // moments
    int m_k = 0;
    double m_tmax = 0;
    std::uint64_t m_y = 4096;
    bool m_dyadic = false;
    auto* mom_cmd = app.add_subcommand("moments", "measured vs predicted k-th moment");
    mom_cmd->add_option("--k", m_k)->required();
    mom_cmd->add_option("--tmax", m_tmax)->required();
    mom_cmd->add_option("--y", m_y, "series truncation for the predicted constant");
    mom_cmd->add_flag("--dyadic", m_dyadic, "emit the trend as plot data");

    // bounds
    double b_A = 0, b_T = 0;
    auto* bounds_cmd = app.add_subcommand("bounds", "upper-bound ratio for |Delta_1|^A");
    bounds_cmd->add_option("--a", b_A)->required();
    bounds_cmd->add_option("--t", b_T)->required();

    // largevalues
    double lv_T = 0, lv_V = 0, lv_step = 0;
    auto* lv_cmd = app.add_subcommand("largevalues", "well-spaced exceedance count");
    lv_cmd->add_option("--t", lv_T)->required();
    lv_cmd->add_option("--v", lv_V)->required();
    lv_cmd->add_option("--grid-step", lv_step, "scan step (default V/8)");

    // pairs
    std::string pair_expr;
    auto* pairs_cmd = app.add_subcommand("pairs", "exact exponent-pair arithmetic");
    pairs_cmd->add_option("--eval", pair_expr, "expression, e.g. \"C(6/11; (0,1),(1/6,4/6))\"")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (cfg.digits < 30)
        throw ValidationError("--digits must be >= 30");
    if (cfg.threads < 1)
        throw ValidationError("--threads must be >= 1");
    set_working_digits(cfg.digits);
    set_thread_count(cfg.threads);

    if (tau_cmd->parsed()) {
        auto method = tau_method == "reference" ? TauMethod::reference : TauMethod::modular;
        EigenformTable table = build_eigenform_table(tau_nmax, method);
        congruence_check(table);
        write_eigenform_cache(cfg.eigen_path(), table);
        ordered_json j = report_header(cfg);
        j["command"] = "tau";
        j["nmax"] = table.nmax;
        j["method"] = tau_method;
        j["cache"] = cfg.eigen_path();
        j["cache_hash"] = hash_hex(hash_file(cfg.eigen_path()));
        emit(cfg, j.dump(2));
        return 0;
    }

    if (coeffs_cmd->parsed()) {
        EigenformTable eigen = load_eigen(cfg);
        if (coeffs_nmax == 0)
            coeffs_nmax = eigen.nmax;
        if (coeffs_nmax > eigen.nmax)
            throw ValidationError("coeffs --nmax exceeds the eigenform cache; rerun "
                                  "`rslab tau --nmax " + std::to_string(coeffs_nmax) + "`");
        if (coeffs_nmax < eigen.nmax) {
            eigen.nmax = coeffs_nmax;
            eigen.a.resize(coeffs_nmax + 1);
        }
        RankinTable table = build_rankin_table(eigen);
        write_rankin_cache(cfg.ctable_path(), table, hash_file(cfg.eigen_path()));
        ordered_json j = report_header(cfg);
        j["command"] = "coeffs";
        j["nmax"] = table.nmax;
        j["cache"] = cfg.ctable_path();
        j["S0_nmax"] = to_decimal(table.s0(table.nmax), 20);
        emit(cfg, j.dump(2));
        return 0;
    }

    if (const_cmd->parsed()) {
        RankinTable table = load_ctable(cfg);
        CalibrationOptions opts;
        opts.subtract_voronoi = subtract_n > 0;
        opts.n_sub = subtract_n;
        opts.points = calib_points;
        if (const_C.has_value() != const_Z0.has_value())
            throw ValidationError("--const-C and --const-Z0 must be given together");
        if (const_C) {
            opts.has_override = true;
            opts.override_C = Real(*const_C);
            opts.override_Z0 = Real(*const_Z0);
        }
        MainTermConstants constants = calibrate_constants(table, xcal, opts);
        constants.table_hash = hash_file(cfg.ctable_path());
        std::string json_text = constants_to_json(constants, cfg.digits);
        atomic_write_text(cfg.constants_path(), json_text);
        emit(cfg, json_text);
        return 0;
    }

    if (delta_cmd->parsed()) {
        RankinTable table = load_ctable(cfg);
        MainTermConstants constants = load_constants(cfg);
        if (d_step <= 0 || d_from > d_to)
            throw ValidationError("delta: need --from <= --to and --step > 0");
        std::ostringstream out;
        out << "x,delta0,delta1\n";
        for (double x = d_from; x <= d_to + 1e-12; x += d_step) {
            Real rx(x);
            out << x << "," << to_decimal(delta0(rx, table, constants), 20) << ","
                << to_decimal(delta1(rx, table, constants), 20) << "\n";
        }
        emit(cfg, out.str());
        return 0;
    }

    if (vor_cmd->parsed()) {
        RankinTable table = load_ctable(cfg);
        MainTermConstants constants = load_constants(cfg);
        TruncationReport rep = truncation_report(v_T, v_N, v_samples, table, constants);
        ordered_json j = report_header(cfg);
        j["command"] = "voronoi";
        j["T"] = rep.T;
        j["N"] = rep.N;
        j["samples"] = rep.samples;
        j["max"] = to_decimal(rep.max_residual, 20);
        j["median"] = to_decimal(rep.median_residual, 20);
        j["fitted_c"] = to_decimal(rep.fitted_c, 20);
        j["n_component"] = to_decimal(rep.n_component, 20);
        if (cfg.format == "csv" || !cfg.out.empty()) {
            std::ostringstream csv;
            csv << "x,delta1,r1,residual\n";
            for (const auto& row : rep.rows)
                csv << row.x << "," << to_decimal(row.delta1, 20) << ","
                    << to_decimal(row.r1, 20) << "," << to_decimal(row.residual, 20) << "\n";
            if (!cfg.out.empty()) {
                atomic_write_text(cfg.out + ".csv", csv.str());
                atomic_write_text(cfg.out + ".json", j.dump(2) + "\n");
                std::cout << j.dump(2) << "\n";
            } else {
                emit(cfg, csv.str());
            }
        } else {
            emit(cfg, j.dump(2));
        }
        return 0;
    }

    if (series_cmd->parsed()) {
        RankinTable table = load_ctable(cfg);
        SeriesValue sv = s_value(s_k, s_l, s_y, table);
        ordered_json j = report_header(cfg);
        j["command"] = "series";
        j["k"] = sv.k;
        j["l"] = sv.l;
        j["y"] = sv.y;
        j["value"] = to_decimal(sv.value, cfg.digits);
        j["term_count"] = sv.term_count;
        if (!solutions_path.empty()) {
            std::ostringstream csv;
            csv << "k,l";
            for (int i = 1; i <= s_k; ++i)
                csv << ",n" << i;
            csv << "\n";
            for (const auto& t : enumerate_zero_sums(s_k, s_l, s_y)) {
                csv << s_k << "," << s_l;
                for (auto n : t.n)
                    csv << "," << n;
                csv << "\n";
            }
            atomic_write_text(solutions_path, csv.str());
            j["solutions_file"] = solutions_path;
        }
        emit(cfg, j.dump(2));
        return 0;
    }

    if (bk_cmd->parsed()) {
        RankinTable table = load_ctable(cfg);
        BkValue bk = b_k(bk_k, bk_y, table);
        ordered_json j = report_header(cfg);
        j["command"] = "bk";
        j["k"] = bk.k;
        j["y"] = bk.y;
        j["value"] = to_decimal(bk.binomial_form, cfg.digits);
        j["pattern_form"] = to_decimal(bk.pattern_form, cfg.digits);
        ordered_json svs = ordered_json::array();
        for (const auto& sv : bk.s_values) {
            ordered_json s;
            s["l"] = sv.l;
            s["value"] = to_decimal(sv.value, cfg.digits);
            s["term_count"] = sv.term_count;
            svs.push_back(s);
        }
        j["s_values"] = svs;
        emit(cfg, j.dump(2));
        return 0;
    }

    if (mom_cmd->parsed()) {
        RankinTable table = load_ctable(cfg);
        MainTermConstants constants = load_constants(cfg);
        MomentReport rep = moment_report(m_k, m_tmax, m_y, table, constants);
        ordered_json j = report_header(cfg);
        j["command"] = "moments";
        j["k"] = rep.k;
        j["T"] = rep.T;
        j["y"] = rep.y;
        j["range"] = rep.range;
        j["measured"] = to_decimal(rep.measured, 25);
        j["predicted"] = to_decimal(rep.predicted, 25);
        j["ratio"] = to_decimal(rep.ratio, 15);
        j["error_exponent"] = rep.error_exponent.str();
        ordered_json trend = ordered_json::array();
        for (std::size_t i = 0; i < rep.trend_T.size(); ++i) {
            ordered_json t;
            t["T"] = rep.trend_T[i];
            t["ratio"] = to_decimal(rep.trend_ratio[i], 15);
            trend.push_back(t);
        }
        j["trend"] = trend;
        if (m_dyadic && !cfg.out.empty()) {
            std::ostringstream dat;
            for (std::size_t i = 0; i < rep.trend_T.size(); ++i)
                dat << rep.trend_T[i] << " " << to_decimal(rep.trend_ratio[i], 15) << "\n";
            atomic_write_text(cfg.out + ".dat", dat.str());
            atomic_write_text(cfg.out + ".json", j.dump(2) + "\n");
            std::cout << j.dump(2) << "\n";
        } else {
            emit(cfg, j.dump(2));
        }
        return 0;
    }

    if (bounds_cmd->parsed()) {
        RankinTable table = load_ctable(cfg);
        MainTermConstants constants = load_constants(cfg);
        BoundReport rep = upper_bound_check(b_A, b_T, table, constants);
        ordered_json j = report_header(cfg);
        j["command"] = "bounds";
        j["A"] = rep.A;
        j["T"] = rep.T;
        j["measured"] = to_decimal(rep.measured, 25);
        j["bound"] = to_decimal(rep.bound, 25);
        j["ratio"] = to_decimal(rep.ratio, 15);
        j["exact_quadrature"] = rep.exact;
        emit(cfg, j.dump(2));
        return 0;
    }

    if (lv_cmd->parsed()) {
        RankinTable table = load_ctable(cfg);
        MainTermConstants constants = load_constants(cfg);
        LargeValueReport rep = find_large_values(lv_T, lv_V, table, constants, lv_step);
        ordered_json j = report_header(cfg);
        j["command"] = "largevalues";
        j["T"] = rep.T;
        j["V"] = rep.V;
        j["grid_step"] = rep.grid_step;
        j["M"] = rep.M;
        j["bound"] = to_decimal(rep.bound, 20);
        j["ratio"] = to_decimal(rep.ratio, 20);
        j["first_regime_scaled"] = to_decimal(rep.first_regime_scaled, 20);
        j["max_scaled"] = to_decimal(rep.max_scaled, 20);
        if (!cfg.out.empty()) {
            std::ostringstream pts;
            for (double x : rep.points)
                pts << x << "\n";
            atomic_write_text(cfg.out + ".points", pts.str());
            j["points_file"] = cfg.out + ".points";
            atomic_write_text(cfg.out + ".json", j.dump(2) + "\n");
            std::cout << j.dump(2) << "\n";
        } else {
            emit(cfg, j.dump(2));
        }
        return 0;
    }

    if (pairs_cmd->parsed()) {
        ExponentPair p = parse_pair_expr(pair_expr);
        emit(cfg, p.str() + "\n");
        return 0;
    }

    return 2; // unreachable with require_subcommand(1)
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const rslab::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const rslab::InternalError& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
