// Command-line front end. Deliberately speaks only the C API (grd/grd.h) so
// it doubles as a smoke test of the shared-library surface.
//
// Exit codes: 0 success (and "valid" verdicts), 1 domain/validation/numeric
// failure (error JSON on stdout), 2 malformed invocation or unreadable input.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "grd/grd.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// ---------------------------------------------------------------------------
// Small helpers
// ---------------------------------------------------------------------------

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class RunFailure : public std::runtime_error {
  public:
    explicit RunFailure(json error) : std::runtime_error("command failed"),
                                      error_(std::move(error)) {}
    const json& error() const { return error_; }

  private:
    json error_;
};

[[noreturn]] void fail_status(grd_status st) {
    json err = {{"error",
                 {{"code", grd_status_name(st)},
                  {"message", grd_last_error_message()},
                  {"index", grd_last_error_index()}}}};
    throw RunFailure(std::move(err));
}

void check_status(grd_status st) {
    if (st != GRD_OK) fail_status(st);
}

std::vector<double> parse_double_vector(const std::string& text, const char* what) {
    std::vector<double> out;
    std::string normalized = text;
    for (char& c : normalized) {
        if (c == ',' || c == ';') c = ' ';
    }
    std::istringstream iss(normalized);
    std::string token;
    while (iss >> token) {
        try {
            std::size_t used = 0;
            double v = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError(std::string(what) + ": cannot parse '" + token + "' as a number");
        }
    }
    if (out.empty()) throw UsageError(std::string(what) + ": empty vector");
    return out;
}

std::vector<int> parse_int_vector(const std::string& text, const char* what) {
    std::vector<double> raw = parse_double_vector(text, what);
    std::vector<int> out;
    out.reserve(raw.size());
    for (double v : raw) {
        int i = static_cast<int>(v);
        if (static_cast<double>(i) != v) {
            throw UsageError(std::string(what) + ": entries must be integers");
        }
        out.push_back(i);
    }
    return out;
}

const char* case_label(grd_case kind) {
    switch (kind) {
        case GRD_CASE_ZERO_SUM: return "zero-sum";
        case GRD_CASE_NEGATIVE_INTEGER: return "negative-integer-sum";
        case GRD_CASE_GENERAL: return "general";
    }
    return "unknown";
}

struct ParamsHandle {
    grd_params* p = nullptr;
    ~ParamsHandle() { grd_params_destroy(p); }
};

struct RngHandle {
    grd_rng* r = nullptr;
    ~RngHandle() { grd_rng_destroy(r); }
};

struct SamplerHandle {
    grd_sampler* s = nullptr;
    ~SamplerHandle() { grd_sampler_destroy(s); }
};

struct TableHandle {
    grd_table* t = nullptr;
    ~TableHandle() { grd_table_destroy(t); }
};

ParamsHandle make_params(const std::vector<double>& a) {
    ParamsHandle h;
    check_status(grd_params_create(a.data(), static_cast<int>(a.size()), &h.p));
    return h;
}

json params_summary(const grd_params* p) {
    int d = grd_params_dim(p);
    std::vector<double> a(static_cast<std::size_t>(d));
    std::vector<double> tails(static_cast<std::size_t>(d));
    grd_case kind = GRD_CASE_GENERAL;
    int order = 0;
    double power = 0.0;
    check_status(grd_params_a(p, a.data()));
    check_status(grd_params_tails(p, tails.data()));
    check_status(grd_params_case(p, &kind, &order, &power));
    return {{"a", a},     {"tails", tails}, {"kind", case_label(kind)},
            {"order", order}, {"power", power}, {"d", d}};
}

// ---------------------------------------------------------------------------
// Config file: JSON object whose keys provide defaults for common flags.
// Command-line flags always win.
// ---------------------------------------------------------------------------

struct Defaults {
    unsigned long long seed = 0;
    std::string method;  // empty = pick by parameter case
    int truncation = 20;
    unsigned long long cap = 0;  // 0 = library default
    std::string format = "csv";
    double quadrature_tol = 0.0;  // 0 = library default
    double series_tol = 0.0;
    int series_max_k = 0;
    double alpha = 0.001;
};

Defaults load_defaults(int argc, char** argv) {
    std::string path;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--config") == 0) path = argv[i + 1];
    }
    Defaults d;
    if (path.empty()) return d;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file '" + path + "'");
    json cfg;
    try {
        in >> cfg;
    } catch (const std::exception& e) {
        throw UsageError("cannot parse config file '" + path + "': " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
    if (cfg.contains("seed")) d.seed = cfg["seed"].get<unsigned long long>();
    if (cfg.contains("method")) d.method = cfg["method"].get<std::string>();
    if (cfg.contains("K")) d.truncation = cfg["K"].get<int>();
    if (cfg.contains("cap")) d.cap = cfg["cap"].get<unsigned long long>();
    if (cfg.contains("format")) d.format = cfg["format"].get<std::string>();
    if (cfg.contains("quadrature_tol")) d.quadrature_tol = cfg["quadrature_tol"].get<double>();
    if (cfg.contains("series_tol")) d.series_tol = cfg["series_tol"].get<double>();
    if (cfg.contains("series_max_k")) d.series_max_k = cfg["series_max_k"].get<int>();
    if (cfg.contains("alpha")) d.alpha = cfg["alpha"].get<double>();
    return d;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

int cmd_validate(const std::string& params_text) {
    std::vector<double> a = parse_double_vector(params_text, "--params");
    grd_validation rep{};
    check_status(grd_validate(a.data(), static_cast<int>(a.size()), &rep));
    json out = {{"valid", rep.valid != 0}};
    if (rep.valid) {
        out["kind"] = case_label(rep.kind);
        out["order"] = rep.order;
        out["power"] = rep.power;
    } else {
        out["code"] = grd_status_name(rep.code);
        if (rep.offending_k > 0) out["offending_k"] = rep.offending_k;
    }
    bool finite = true;
    for (double x : a) {
        if (!(x == x) || x > 1.7976931348623157e308 || x < -1.7976931348623157e308) {
            finite = false;
        }
    }
    if (finite && a.size() >= 1) {
        std::vector<double> tails(a.size());
        if (grd_tail_sums(a.data(), static_cast<int>(a.size()), tails.data()) == GRD_OK) {
            out["tails"] = tails;
        }
    }
    std::cout << out.dump(2) << "\n";
    return rep.valid ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------------
// sample
// ---------------------------------------------------------------------------

grd_method pick_method(const std::string& name, const grd_params* p) {
    if (name == "zero-sum") return GRD_METHOD_ZERO_SUM;
    if (name == "exact") return GRD_METHOD_EXACT;
    if (name == "approx") return GRD_METHOD_APPROX;
    if (name == "rejection") return GRD_METHOD_REJECTION;
    if (!name.empty()) throw UsageError("unknown method '" + name + "'");
    grd_case kind = GRD_CASE_GENERAL;
    check_status(grd_params_case(p, &kind, nullptr, nullptr));
    switch (kind) {
        case GRD_CASE_ZERO_SUM: return GRD_METHOD_ZERO_SUM;
        case GRD_CASE_NEGATIVE_INTEGER: return GRD_METHOD_EXACT;
        case GRD_CASE_GENERAL: return GRD_METHOD_REJECTION;
    }
    return GRD_METHOD_REJECTION;
}

const char* method_label(grd_method m) {
    switch (m) {
        case GRD_METHOD_ZERO_SUM: return "zero-sum";
        case GRD_METHOD_EXACT: return "exact";
        case GRD_METHOD_APPROX: return "approx";
        case GRD_METHOD_REJECTION: return "rejection";
    }
    return "unknown";
}

void write_rows(std::ostream& os, const std::vector<double>& cols, long long n, int d,
                const std::string& format) {
    if (format == "csv") {
        char buf[64];
        for (long long i = 0; i < n; ++i) {
            for (int k = 0; k < d; ++k) {
                std::snprintf(buf, sizeof(buf), "%.17g",
                              cols[static_cast<std::size_t>(k) * static_cast<std::size_t>(n) +
                                   static_cast<std::size_t>(i)]);
                os << buf;
                os << (k + 1 == d ? '\n' : ',');
            }
        }
    } else {  // jsonl
        for (long long i = 0; i < n; ++i) {
            json row = json::array();
            for (int k = 0; k < d; ++k) {
                row.push_back(cols[static_cast<std::size_t>(k) * static_cast<std::size_t>(n) +
                                   static_cast<std::size_t>(i)]);
            }
            os << json{{"y", row}}.dump() << "\n";
        }
    }
}

json dump_table(const grd_params* p, grd_method method, int truncation,
                unsigned long long cap) {
    TableHandle table;
    grd_case kind = GRD_CASE_GENERAL;
    check_status(grd_params_case(p, &kind, nullptr, nullptr));
    if (method == GRD_METHOD_EXACT || kind != GRD_CASE_GENERAL) {
        check_status(grd_table_exact(p, cap, &table.t));
    } else {
        check_status(grd_table_truncated(p, truncation, cap, &table.t));
    }
    long long size = grd_table_size(table.t);
    int d = grd_table_dim(table.t);
    double clipped_mass = 0.0;
    long long clipped_count = 0;
    check_status(grd_table_diag(table.t, &clipped_mass, &clipped_count));
    json entries = json::array();
    std::vector<int> m(static_cast<std::size_t>(d));
    for (long long i = 0; i < size; ++i) {
        double w = 0.0;
        check_status(grd_table_entry(table.t, i, m.data(), &w));
        entries.push_back({{"m", m}, {"weight", w}});
    }
    return {{"size", size},
            {"clipped_mass", clipped_mass},
            {"clipped_count", clipped_count},
            {"entries", entries}};
}

int cmd_sample(const std::string& params_text, long long n, unsigned long long seed,
               const std::string& method_name, int truncation, unsigned long long cap,
               const std::string& out_path, const std::string& format, bool want_table) {
    if (n < 0) throw UsageError("--n must be nonnegative");
    if (format != "csv" && format != "jsonl") {
        throw UsageError("--format must be 'csv' or 'jsonl'");
    }
    std::vector<double> a = parse_double_vector(params_text, "--params");
    ParamsHandle params = make_params(a);
    grd_method method = pick_method(method_name, params.p);

    SamplerHandle sampler;
    check_status(grd_sampler_create(params.p, method, truncation, cap, &sampler.s));
    RngHandle rng;
    check_status(grd_rng_create(seed, &rng.r));

    const int d = grd_params_dim(params.p);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path, std::ios::binary);
        if (!file) throw UsageError("cannot open output file '" + out_path + "'");
        os = &file;
    }

    if (format == "csv") {
        for (int k = 1; k <= d; ++k) *os << "y" << k << (k == d ? '\n' : ',');
    }
    const long long chunk = 65536;
    std::vector<double> cols(static_cast<std::size_t>(chunk) * static_cast<std::size_t>(d));
    long long remaining = n;
    while (remaining > 0) {
        long long take = remaining < chunk ? remaining : chunk;
        check_status(grd_sampler_draw_batch(sampler.s, rng.r, take, cols.data()));
        write_rows(*os, cols, take, d, format);
        remaining -= take;
    }
    os->flush();
    if (!out_path.empty() && !file) throw UsageError("failed writing '" + out_path + "'");

    grd_sampler_stats st{};
    check_status(grd_sampler_get_stats(sampler.s, &st));
    json summary = {{"params", params_summary(params.p)},
                    {"method", method_label(method)},
                    {"seed", seed},
                    {"n", n},
                    {"format", format},
                    {"stats",
                     {{"draws", st.draws},
                      {"proposals", st.proposals},
                      {"accepted", st.accepted},
                      {"acceptance_rate", st.acceptance_rate},
                      {"clipped_mass", st.clipped_mass},
                      {"table_size", st.table_size}}}};
    if (method == GRD_METHOD_APPROX) summary["K"] = truncation;
    if (want_table) summary["table"] = dump_table(params.p, method, truncation, cap);
    if (!out_path.empty()) {
        summary["written"] = out_path;
        std::cout << summary.dump(2) << "\n";
    } else {
        // keep stdout pure data; summary goes to stderr
        std::cerr << summary.dump(2) << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------
// moments
// ---------------------------------------------------------------------------

int cmd_moments(const std::string& params_text, bool want_mean, const std::string& n_text,
                const std::string& ratio_text, int ratio_m, int neg_m, double power,
                bool have_power, double series_tol, int series_max_k) {
    std::vector<double> a = parse_double_vector(params_text, "--params");
    ParamsHandle params = make_params(a);
    const int d = grd_params_dim(params.p);
    int selectors = (want_mean ? 1 : 0) + (!n_text.empty() ? 1 : 0) +
                    (!ratio_text.empty() ? 1 : 0) + (neg_m > 0 ? 1 : 0) + (have_power ? 1 : 0);
    if (selectors != 1) {
        throw UsageError(
            "pick exactly one of --mean, --n, --ratio-n (with --M), --neg-M, --power");
    }
    json out = {{"params", params_summary(params.p)}};
    if (want_mean) {
        std::vector<double> mean(static_cast<std::size_t>(d));
        check_status(grd_mean_vector(params.p, mean.data()));
        out["mean"] = mean;
    } else if (!n_text.empty()) {
        std::vector<int> n = parse_int_vector(n_text, "--n");
        double value = 0.0;
        check_status(
            grd_positive_moments(params.p, n.data(), static_cast<int>(n.size()), &value));
        out["n"] = n;
        out["value"] = value;
    } else if (!ratio_text.empty()) {
        if (ratio_m < 0) throw UsageError("--ratio-n needs --M >= 0");
        std::vector<int> n = parse_int_vector(ratio_text, "--ratio-n");
        double value = 0.0;
        check_status(grd_ratio_moment_zero_sum(params.p, n.data(),
                                               static_cast<int>(n.size()), ratio_m, &value));
        out["n"] = n;
        out["M"] = ratio_m;
        out["value"] = value;
    } else if (neg_m > 0) {
        double value = 0.0;
        check_status(grd_negative_moment_y1(params.p, neg_m, &value));
        out["M"] = neg_m;
        out["value"] = value;
    } else {
        grd_series_diag diag{};
        double value = 0.0;
        check_status(grd_expected_power_y1_series(params.p, power, series_tol, series_max_k,
                                                  &value, &diag));
        out["r"] = power;
        out["value"] = value;
        out["series"] = {{"terms_used", diag.terms_used},
                         {"converged", diag.converged != 0},
                         {"final_increment", diag.final_increment}};
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// loggap
// ---------------------------------------------------------------------------

int cmd_loggap(const std::string& params_text, bool want_rates, const std::string& n_text,
               const std::string& t_text, bool have_k, int truncation, double series_tol,
               int series_max_k) {
    std::vector<double> a = parse_double_vector(params_text, "--params");
    ParamsHandle params = make_params(a);
    const int d = grd_params_dim(params.p);
    int selectors = (want_rates ? 1 : 0) + (!n_text.empty() ? 1 : 0) + (!t_text.empty() ? 1 : 0);
    if (selectors != 1) throw UsageError("pick exactly one of --rates, --n, --t");
    json out = {{"params", params_summary(params.p)}};
    if (want_rates) {
        std::vector<double> rates(static_cast<std::size_t>(d - 1));
        check_status(grd_loggap_rates_zero_sum(params.p, rates.data()));
        out["rates"] = rates;
    } else if (!n_text.empty()) {
        std::vector<int> n = parse_int_vector(n_text, "--n");
        grd_case kind = GRD_CASE_GENERAL;
        check_status(grd_params_case(params.p, &kind, nullptr, nullptr));
        double value = 0.0;
        if (have_k || kind == GRD_CASE_GENERAL) {
            grd_series_diag diag{};
            check_status(grd_loggap_moments_series(params.p, n.data(),
                                                   static_cast<int>(n.size()), truncation,
                                                   series_tol, series_max_k, &value, &diag));
            out["K"] = truncation;
            out["series"] = {{"terms_used", diag.terms_used},
                             {"converged", diag.converged != 0},
                             {"final_increment", diag.final_increment}};
        } else {
            check_status(grd_loggap_moments(params.p, n.data(),
                                            static_cast<int>(n.size()), &value));
        }
        out["n"] = n;
        out["value"] = value;
    } else {
        std::vector<double> t = parse_double_vector(t_text, "--t");
        double value = 0.0;
        check_status(grd_loggap_mgf(params.p, t.data(), static_cast<int>(t.size()), &value));
        out["t"] = t;
        out["value"] = value;
    }
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------

int cmd_calibrate(const std::string& target_text) {
    std::vector<double> y = parse_double_vector(target_text, "--target");
    ParamsHandle fitted;
    check_status(
        grd_calibrate_first_moment(y.data(), static_cast<int>(y.size()), &fitted.p));
    json out = params_summary(fitted.p);
    out["target"] = y;
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

std::vector<std::vector<double>> read_sample_rows(const std::string& path, int d) {
    std::istream* in = &std::cin;
    std::ifstream file;
    if (path != "-") {
        file.open(path);
        if (!file) throw UsageError("cannot open samples file '" + path + "'");
        in = &file;
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(*in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            // Skip a header line (first field not numeric).
            std::string token = line.substr(0, line.find(','));
            try {
                std::size_t used = 0;
                (void)std::stod(token, &used);
            } catch (const std::exception&) {
                continue;
            }
        }
        std::vector<double> row = parse_double_vector(line, "samples");
        if (static_cast<int>(row.size()) != d) {
            throw UsageError("sample row has " + std::to_string(row.size()) +
                             " fields, expected " + std::to_string(d));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw UsageError("no sample rows read");
    return rows;
}

int cmd_check(bool quick, const std::string& samples_path, const std::string& params_text,
              int truncation, double series_tol, int series_max_k) {
    if (samples_path.empty()) {
        char* report = nullptr;
        check_status(grd_check_report(quick ? 1 : 0, &report));
        std::string text(report);
        grd_string_free(report);
        std::cout << text << "\n";
        json parsed = json::parse(text);
        return parsed["all_passed"].get<bool>() ? kExitOk : kExitFailure;
    }
    if (params_text.empty()) throw UsageError("--samples needs --params");
    std::vector<double> a = parse_double_vector(params_text, "--params");
    ParamsHandle params = make_params(a);
    const int d = grd_params_dim(params.p);
    std::vector<std::vector<double>> rows = read_sample_rows(samples_path, d);
    const std::size_t n = rows.size();

    grd_case kind = GRD_CASE_GENERAL;
    int order = 0;
    check_status(grd_params_case(params.p, &kind, &order, nullptr));

    json comparisons = json::array();
    bool all_passed = true;
    auto compare = [&](const std::string& name, const std::vector<double>& xs, double ref) {
        double mean = 0.0;
        double se = 0.0;
        check_status(
            grd_mc_estimate(xs.data(), static_cast<long long>(xs.size()), &mean, &se));
        double sigmas = se > 0.0 ? std::abs(mean - ref) / se : 0.0;
        bool passed = sigmas <= 4.0;
        all_passed = all_passed && passed;
        comparisons.push_back({{"name", name},
                               {"sample_mean", mean},
                               {"se", se},
                               {"reference", ref},
                               {"sigmas", sigmas},
                               {"passed", passed}});
    };

    // Coordinate means have a closed form when sum(a) == -1.
    if (kind == GRD_CASE_NEGATIVE_INTEGER && order == 1) {
        std::vector<double> ref(static_cast<std::size_t>(d));
        check_status(grd_mean_vector(params.p, ref.data()));
        for (int k = 0; k < d; ++k) {
            std::vector<double> xs(n);
            for (std::size_t i = 0; i < n; ++i) xs[i] = rows[i][static_cast<std::size_t>(k)];
            compare("E[Y" + std::to_string(k + 1) + "]", xs, ref[static_cast<std::size_t>(k)]);
        }
    }

    // Log-gap means are available in every case (exact or via the series).
    for (int k = 2; k <= d; ++k) {
        std::vector<double> zs(n);
        for (std::size_t i = 0; i < n; ++i) {
            double hi = rows[i][static_cast<std::size_t>(k - 2)];
            double lo = rows[i][static_cast<std::size_t>(k - 1)];
            if (!(hi > 0.0) || !(lo > 0.0)) {
                throw UsageError("sample row " + std::to_string(i + 1) +
                                 " has a nonpositive coordinate; log gaps undefined");
            }
            zs[i] = std::log(hi) - std::log(lo);
        }
        std::vector<int> unit(static_cast<std::size_t>(d - 1), 0);
        unit[static_cast<std::size_t>(k - 2)] = 1;
        double ref = 0.0;
        if (kind == GRD_CASE_GENERAL) {
            grd_series_diag diag{};
            check_status(grd_loggap_moments_series(params.p, unit.data(), d - 1, truncation,
                                                   series_tol, series_max_k, &ref, &diag));
        } else {
            check_status(grd_loggap_moments(params.p, unit.data(), d - 1, &ref));
        }
        compare("E[Z" + std::to_string(k) + "]", zs, ref);
    }

    json out = {{"params", params_summary(params.p)},
                {"n", n},
                {"comparisons", comparisons},
                {"all_passed", all_passed},
                {"criterion", "|sample mean - reference| <= 4 SE"}};
    std::cout << out.dump(2) << "\n";
    return all_passed ? kExitOk : kExitFailure;
}

} // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    try {
        Defaults defaults = load_defaults(argc, argv);

        CLI::App app{"rank-Dirichlet distribution toolkit"};
        app.set_version_flag("--version", grd_version());
        app.require_subcommand(1);
        std::string config_path;
        app.add_option("--config", config_path,
                       "JSON file with default values for seed/method/K/cap/format/...");

        // validate
        auto* validate = app.add_subcommand("validate", "check a parameter vector");
        std::string v_params;
        validate->add_option("--params,-a", v_params, "comma-separated parameters")
            ->required();

        // sample
        auto* sample = app.add_subcommand("sample", "draw random variates");
        std::string s_params, s_method = defaults.method, s_out, s_format = defaults.format;
        long long s_n = 1000;
        unsigned long long s_seed = defaults.seed, s_cap = defaults.cap;
        int s_trunc = defaults.truncation;
        bool s_table = false;
        sample->add_option("--params,-a", s_params, "comma-separated parameters")->required();
        sample->add_option("--n,-n", s_n, "number of draws (default 1000)");
        sample->add_option("--seed", s_seed, "RNG seed (default 0)");
        sample->add_option("--method", s_method,
                           "zero-sum | exact | approx | rejection (default: by case)");
        sample->add_option("--K", s_trunc, "series truncation order for approx (default 20)");
        sample->add_option("--cap", s_cap, "mixing-table enumeration cap (0 = default)");
        sample->add_option("--out,-o", s_out, "write rows to this file (summary on stdout)");
        sample->add_option("--format", s_format, "csv | jsonl (default csv)");
        sample->add_flag("--dump-table", s_table, "include the mixing table in the summary");

        // moments
        auto* moments = app.add_subcommand("moments", "closed-form and series moments");
        std::string m_params, m_n, m_ratio;
        bool m_mean = false;
        int m_big = -1, m_neg = 0;
        double m_power = 0.0;
        moments->add_option("--params,-a", m_params, "comma-separated parameters")->required();
        moments->add_flag("--mean", m_mean, "first-moment vector (sum(a) == -1)");
        moments->add_option("--n", m_n, "orders for E[prod Y^n] (sum(a) == -M)");
        moments->add_option("--ratio-n", m_ratio,
                            "orders for E[prod Y^n / Y1^M] (zero-sum; needs --M)");
        moments->add_option("--M", m_big, "ratio-moment order M");
        moments->add_option("--neg-M", m_neg, "order for E[Y1^-M] (zero-sum)");
        auto* power_opt =
            moments->add_option("--power", m_power, "real r for the series E[Y1^-r] (zero-sum)");
        moments->add_option("--series-tol", defaults.series_tol,
                            "series stopping tolerance (0 = default)");
        moments->add_option("--series-max-k", defaults.series_max_k,
                            "series term limit (0 = default)");

        // loggap
        auto* loggap = app.add_subcommand("loggap", "log-gap laws and moments");
        std::string l_params, l_n, l_t;
        bool l_rates = false;
        int l_trunc = defaults.truncation;
        loggap->add_option("--params,-a", l_params, "comma-separated parameters")->required();
        loggap->add_flag("--rates", l_rates, "exponential rates (zero-sum)");
        loggap->add_option("--n", l_n, "orders for E[prod Z^n]");
        loggap->add_option("--t", l_t, "MGF argument vector (size d-1)");
        auto* k_opt =
            loggap->add_option("--K", l_trunc, "series truncation order (forces series path)");
        loggap->add_option("--series-tol", defaults.series_tol,
                           "series stopping tolerance (0 = default)");
        loggap->add_option("--series-max-k", defaults.series_max_k,
                           "series term limit (0 = default)");

        // calibrate
        auto* calibrate =
            app.add_subcommand("calibrate", "fit sum(a) == -1 parameters to a mean vector");
        std::string c_target;
        calibrate->add_option("--target", c_target, "target mean vector")->required();

        // check
        auto* check = app.add_subcommand("check", "formula-vs-oracle self checks");
        bool k_quick = false;
        std::string k_samples, k_params;
        int k_trunc = defaults.truncation;
        check->add_flag("--quick", k_quick, "smaller grids");
        check->add_option("--samples", k_samples, "CSV sample file ('-' for stdin)");
        check->add_option("--params", k_params, "parameters the samples claim to follow");
        check->add_option("--K", k_trunc, "series truncation order for references");

        // Let top-level options (--config, --version) appear after the
        // subcommand name as well.
        for (CLI::App* sub : {validate, sample, moments, loggap, calibrate, check}) {
            sub->fallthrough();
        }

        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            // prints help/version for those requests (exit 0), usage errors otherwise
            int code = app.exit(e);
            return code == 0 ? kExitOk : kExitUsage;
        }

        if (validate->parsed()) return cmd_validate(v_params);
        if (sample->parsed()) {
            return cmd_sample(s_params, s_n, s_seed, s_method, s_trunc, s_cap, s_out, s_format,
                              s_table);
        }
        if (moments->parsed()) {
            return cmd_moments(m_params, m_mean, m_n, m_ratio, m_big, m_neg, m_power,
                               power_opt->count() > 0, defaults.series_tol,
                               defaults.series_max_k);
        }
        if (loggap->parsed()) {
            return cmd_loggap(l_params, l_rates, l_n, l_t, k_opt->count() > 0, l_trunc,
                              defaults.series_tol, defaults.series_max_k);
        }
        if (calibrate->parsed()) return cmd_calibrate(c_target);
        if (check->parsed()) {
            return cmd_check(k_quick, k_samples, k_params, k_trunc, defaults.series_tol,
                             defaults.series_max_k);
        }
        return kExitUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const RunFailure& e) {
        std::cout << e.error().dump(2) << "\n";
        return kExitFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
}
