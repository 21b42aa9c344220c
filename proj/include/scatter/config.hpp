#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "approx.hpp"

namespace scatter {

using ordered_json = nlohmann::ordered_json;

// Exact rational from a JSON value: integers and doubles convert exactly
// (doubles are dyadic), strings go through the "p/q" / decimal parser.
inline Rat json_rat(const ordered_json& v, const std::string& field) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rat(Int(std::to_string(v.get<long long>())));
        if (v.is_number_float()) {
            Rat r;
            mpq_set_d(r.get_mpq_t(), v.get<double>());
            return r;
        }
    } catch (const error&) {
        throw;
    } catch (const std::exception& e) {
        fail(errc::config, field + ": " + e.what());
    }
    fail(errc::config, field + ": expected a number or rational string");
}

inline long json_long(const ordered_json& v, const std::string& field) {
    require(v.is_number_integer(), errc::config, field + ": expected an integer");
    return v.get<long>();
}

inline void reject_unknown_keys(const ordered_json& obj, const std::string& where,
                                std::initializer_list<const char*> known) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        require(ok, errc::config, where + ": unknown field \"" + it.key() + "\"");
    }
}

struct RunConfig {
    KernelSpec kernel;
    Provider provider = Provider::integers();
    Target target = Target::builtin("sin");
    Rat a = Rat(-1), b = Rat(1);
    Rat epsilon = Rat(1, 100);
    size_t grid_n = 1001;
    mpfr_prec_t precision_bits = 256;
    std::string out_certificate; // empty: stdout
    std::string out_samples;     // empty: skip CSV
};

inline KernelSpec parse_kernel(const ordered_json& j) {
    require(j.is_object(), errc::config, "kernel: expected an object");
    reject_unknown_keys(j, "kernel", {"family", "q", "r", "c", "L"});
    require(j.contains("family"), errc::config, "kernel.family is required");
    require(j["family"].is_string(), errc::config, "kernel.family: expected a string");
    KernelSpec k;
    k.family = family_from_name(j["family"].get<std::string>());
    if (j.contains("q")) k.q = json_long(j["q"], "kernel.q");
    if (j.contains("r")) k.r = json_rat(j["r"], "kernel.r");
    if (j.contains("c")) k.c = json_rat(j["c"], "kernel.c");
    if (j.contains("L")) k.L = json_long(j["L"], "kernel.L");
    k.validate();
    return k;
}

inline Provider parse_provider(const ordered_json& j) {
    require(j.is_object(), errc::config, "provider: expected an object");
    reject_unknown_keys(j, "provider",
                        {"kind", "delta", "jitter", "seed", "list", "extension", "step", "offset"});
    require(j.contains("kind"), errc::config, "provider.kind is required");
    require(j["kind"].is_string(), errc::config, "provider.kind: expected a string");
    std::string kind = j["kind"].get<std::string>();
    if (kind == "integers") return Provider::integers();
    if (kind == "jittered") {
        Rat amp = j.contains("jitter") ? json_rat(j["jitter"], "provider.jitter") : Rat(1, 4);
        uint64_t seed = 0;
        if (j.contains("seed")) {
            require(j["seed"].is_number_unsigned() || j["seed"].is_number_integer(), errc::config,
                    "provider.seed: expected an integer");
            seed = j["seed"].get<uint64_t>();
        }
        return Provider::jittered(amp, seed);
    }
    if (kind == "explicit") {
        require(j.contains("list") && j["list"].is_array(), errc::config,
                "provider.list: expected an array of rationals");
        std::vector<Rat> nodes;
        for (const auto& v : j["list"]) nodes.push_back(json_rat(v, "provider.list[]"));
        std::optional<Rat> delta, ext;
        if (j.contains("delta")) delta = json_rat(j["delta"], "provider.delta");
        if (j.contains("extension")) ext = json_rat(j["extension"], "provider.extension");
        return Provider::explicit_list(std::move(nodes), delta, ext);
    }
    if (kind == "affine") {
        Rat step = j.contains("step") ? json_rat(j["step"], "provider.step") : Rat(1);
        Rat offset = j.contains("offset") ? json_rat(j["offset"], "provider.offset") : Rat(0);
        return Provider::affine(step, offset);
    }
    fail(errc::config, "provider.kind: unknown kind \"" + kind + "\"");
}

inline Target parse_target(const ordered_json& j) {
    if (j.is_string()) return Target::builtin(j.get<std::string>());
    require(j.is_object(), errc::config, "target: expected a builtin name or an object");
    reject_unknown_keys(j, "target", {"polynomial", "table"});
    if (j.contains("polynomial")) {
        require(j["polynomial"].is_array(), errc::config,
                "target.polynomial: expected a coefficient array (ascending degree)");
        std::vector<Rat> c;
        for (const auto& v : j["polynomial"]) c.push_back(json_rat(v, "target.polynomial[]"));
        return Target::polynomial_target(Polynomial(std::move(c)));
    }
    if (j.contains("table")) {
        require(j["table"].is_array(), errc::config, "target.table: expected [[x,f],...] rows");
        std::vector<std::pair<double, double>> rows;
        for (const auto& v : j["table"]) {
            require(v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number(),
                    errc::config, "target.table: each row must be [x, f]");
            rows.emplace_back(v[0].get<double>(), v[1].get<double>());
        }
        return Target::table_target(std::move(rows));
    }
    fail(errc::config, "target: need \"polynomial\" or \"table\" (or a builtin name)");
}

inline RunConfig parse_config(const ordered_json& j) {
    require(j.is_object(), errc::config, "config: expected a JSON object");
    reject_unknown_keys(j, "config", {"kernel", "provider", "target", "interval", "epsilon",
                                      "grid", "precision_bits", "output"});
    require(j.contains("kernel"), errc::config, "config.kernel is required");
    RunConfig cfg;
    cfg.kernel = parse_kernel(j["kernel"]);
    if (j.contains("provider")) cfg.provider = parse_provider(j["provider"]);
    if (j.contains("target")) cfg.target = parse_target(j["target"]);
    if (j.contains("interval")) {
        const auto& iv = j["interval"];
        require(iv.is_array() && iv.size() == 2, errc::config, "interval: expected [a, b]");
        cfg.a = json_rat(iv[0], "interval[0]");
        cfg.b = json_rat(iv[1], "interval[1]");
        require(cfg.a < cfg.b, errc::config, "interval: a must be less than b");
    }
    if (j.contains("epsilon")) {
        cfg.epsilon = json_rat(j["epsilon"], "epsilon");
        require(cfg.epsilon > 0, errc::config, "epsilon must be positive");
    }
    if (j.contains("grid")) {
        long g = json_long(j["grid"], "grid");
        require(g >= 2, errc::config, "grid must be at least 2");
        cfg.grid_n = static_cast<size_t>(g);
    }
    if (j.contains("precision_bits")) {
        long p = json_long(j["precision_bits"], "precision_bits");
        require(p >= MPFR_PREC_MIN && p <= 1 << 24, errc::config, "precision_bits out of range");
        cfg.precision_bits = static_cast<mpfr_prec_t>(p);
    } else if (const char* env = std::getenv("SCATTER_PRECISION_BITS")) {
        char* end = nullptr;
        long p = std::strtol(env, &end, 10);
        require(end && *end == '\0' && p >= MPFR_PREC_MIN && p <= 1 << 24, errc::config,
                "SCATTER_PRECISION_BITS: invalid value");
        cfg.precision_bits = static_cast<mpfr_prec_t>(p);
    }
    if (j.contains("output")) {
        const auto& out = j["output"];
        require(out.is_object(), errc::config, "output: expected an object");
        reject_unknown_keys(out, "output", {"certificate", "samples"});
        if (out.contains("certificate")) {
            require(out["certificate"].is_string(), errc::config, "output.certificate: path string");
            cfg.out_certificate = out["certificate"].get<std::string>();
        }
        if (out.contains("samples")) {
            require(out["samples"].is_string(), errc::config, "output.samples: path string");
            cfg.out_samples = out["samples"].get<std::string>();
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), errc::config, "cannot open config file: " + path);
    ordered_json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(errc::config, "config parse error in " + path + ": " + e.what());
    }
    return parse_config(j);
}

// ---- output serialization ------------------------------------------------

inline ordered_json kernel_json(const KernelSpec& k) {
    ordered_json j;
    j["family"] = family_name(k.family);
    j["q"] = k.q;
    j["r"] = rat_str(k.r);
    j["c"] = rat_str(k.c);
    if (k.family == Family::related_log) j["L"] = k.L;
    return j;
}

// terms carry both a readable decimal and the exact hex-float for round-trips
inline ordered_json combination_json(const Combination& s) {
    ordered_json j;
    j["kernel"] = kernel_json(s.kernel);
    j["precision_bits"] = static_cast<long>(s.precision_bits);
    ordered_json terms = ordered_json::array();
    for (const auto& [node, coef] : s.terms) {
        ordered_json t;
        t["node"] = rat_str(node);
        t["coefficient"] = coef.dec_str();
        t["coefficient_hex"] = coef.hex_str();
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

inline ordered_json certificate_json(const Certificate& c, const Combination& s) {
    ordered_json j;
    j["interval"] = {rat_str(c.a), rat_str(c.b)};
    j["grid"] = c.grid_n;
    j["sup_error"] = c.sup_error;
    ordered_json lp;
    for (const auto& [p, v] : c.lp_errors) lp[std::to_string(p)] = v;
    j["lp_errors"] = std::move(lp);
    j["epsilon"] = c.epsilon;
    j["y1_used"] = rat_str(c.y1_used);
    j["precision_bits"] = static_cast<long>(c.precision_bits);
    j["cheb_degree"] = c.cheb_degree;
    j["cheb_error"] = c.cheb_error;
    ordered_json residuals = ordered_json::array();
    for (const auto& st : c.stages) residuals.push_back(st.solver_residual);
    j["solver_residuals"] = std::move(residuals);
    ordered_json stages = ordered_json::array();
    for (const auto& st : c.stages) {
        ordered_json sj;
        sj["index"] = st.index;
        sj["d"] = rat_str(st.d);
        sj["y1"] = rat_str(st.y1);
        sj["raw_error"] = st.raw_error;
        sj["weighted_error"] = st.weighted_error;
        sj["solver_residual"] = st.solver_residual;
        sj["growth_constant"] = st.growth_constant;
        sj["n_terms"] = st.n_terms;
        sj["bits_used"] = static_cast<long>(st.bits_used);
        stages.push_back(std::move(sj));
    }
    j["stages"] = std::move(stages);
    j["success"] = c.success;
    j["combination"] = combination_json(s);
    return j;
}

inline std::string csv_samples(const std::vector<SampleRow>& rows) {
    std::string out = "x,f,s,abs_err\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.x, r.f, r.s, r.abs_err);
        out += buf;
    }
    return out;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    require(out.good(), errc::config, "cannot open output file: " + path);
    out << content;
    require(out.good(), errc::config, "write failed: " + path);
}

} // namespace scatter
