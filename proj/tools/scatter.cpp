// scatter: expansion generators, doubling-sequence solvers, and the
// translate-approximation pipeline behind one JSON-configured front end.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <scatter/scatter.hpp>

namespace {

using namespace scatter;

void emit(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-")
        std::cout << content;
    else
        write_file(path, content);
}

ordered_json poly_entry(unsigned long k, const Polynomial& p) {
    ordered_json e;
    e["k"] = k;
    ordered_json coefs = ordered_json::array();
    for (const Rat& c : p.coeffs()) coefs.push_back(rat_str(c));
    e["coefficients"] = std::move(coefs);
    e["degree"] = p.degree();
    e["leading"] = rat_str(p.leading());
    return e;
}

int cmd_expand(const RunConfig& cfg, unsigned long k_max, const std::string& out) {
    const KernelSpec& k = cfg.kernel;
    ordered_json j;
    switch (k.family) {
    case Family::binomial_power:
    case Family::arctan_shifted: {
        ExpansionModel model = classify_basis(k);
        j = ordered_json::array();
        for (unsigned long i = 0; i <= k_max; ++i) j.push_back(poly_entry(i, model.A(i)));
        break;
    }
    case Family::arctan_binomial: {
        ordered_json c = ordered_json::array();
        for (unsigned long i = 0; i <= k_max; ++i)
            c.push_back(poly_entry(i, arctan_binomial_Ck(k, i)));
        j["C"] = std::move(c);
        break;
    }
    case Family::related_arctan: {
        RelatedSeries s = related_series(k, k_max);
        ordered_json c = ordered_json::array();
        for (unsigned long i = 0; i <= k_max; ++i) c.push_back(poly_entry(i, s.C[i]));
        j["C"] = std::move(c);
        break;
    }
    case Family::inv_x_log: {
        require(k_max >= 2, errc::config, "log expansion needs k_max >= 2");
        LogSeries s = log_kernel_series(k_max);
        ordered_json a = ordered_json::array(), b = ordered_json::array();
        for (unsigned long i = 1; i <= k_max; ++i) a.push_back(poly_entry(i, s.A[i]));
        for (unsigned long i = 2; i <= k_max; ++i) b.push_back(poly_entry(i, s.B[i]));
        j["A"] = std::move(a);
        j["B"] = std::move(b);
        break;
    }
    case Family::related_log: {
        unsigned long L = static_cast<unsigned long>(k.L);
        require(k_max >= L + 1, errc::config, "related log expansion needs k_max > L");
        RelatedSeries s = related_series(k, k_max);
        ordered_json a = ordered_json::array(), b = ordered_json::array();
        for (unsigned long i = L; i <= k_max; ++i) a.push_back(poly_entry(i, s.A[i]));
        for (unsigned long i = L + 1; i <= k_max; ++i) b.push_back(poly_entry(i, s.B[i]));
        j["A"] = std::move(a);
        j["B"] = std::move(b);
        break;
    }
    }
    emit(out, j.dump(2) + "\n");
    return 0;
}

int cmd_doubling(const RunConfig& cfg, const std::string& sign_s, const Rat& threshold,
                 size_t count, const std::string& out) {
    Sign sign = sign_s == "negative" ? Sign::negative : Sign::positive;
    require(sign_s == "positive" || sign_s == "negative", errc::config,
            "sign must be positive or negative");
    DoublingSequence Y = extract_doubling(cfg.provider, sign, threshold, count);
    ordered_json j;
    j["sign"] = sign_s;
    j["threshold"] = rat_str(threshold);
    j["count"] = count;
    j["delta"] = rat_str(cfg.provider.delta());
    ordered_json nodes = ordered_json::array(), gaps = ordered_json::array();
    Rat worst(0);
    for (const Rat& y : Y.nodes) nodes.push_back(rat_str(y));
    for (const Rat& g : Y.gap_products) {
        gaps.push_back(rat_str(g));
        if (g > worst) worst = g;
    }
    j["nodes"] = std::move(nodes);
    j["gap_products"] = std::move(gaps);
    j["max_gap_product"] = rat_str(worst);
    emit(out, j.dump(2) + "\n");
    return 0;
}

int cmd_solve(const RunConfig& cfg, const std::string& mode, long N, const std::string& sign_s,
              const Rat& threshold, const std::string& out) {
    require(N >= 1, errc::config, "N must be at least 1");
    require(mode == "vandermonde" || mode == "log-alternant", errc::config,
            "mode must be vandermonde or log-alternant");
    Sign sign = sign_s == "negative" ? Sign::negative : Sign::positive;
    require(sign_s == "positive" || sign_s == "negative", errc::config,
            "sign must be positive or negative");

    ordered_json j;
    j["mode"] = mode;
    j["sign"] = sign_s;
    j["threshold"] = rat_str(threshold);
    j["N"] = N;
    if (mode == "vandermonde") {
        DoublingSequence Y = extract_doubling(cfg.provider, sign, threshold,
                                              static_cast<size_t>(N));
        std::vector<Rat> c = vandermonde_coeffs(Y.nodes, static_cast<size_t>(N));
        ordered_json nodes = ordered_json::array(), coefs = ordered_json::array(),
                     gaps = ordered_json::array();
        for (const Rat& y : Y.nodes) nodes.push_back(rat_str(y));
        for (const Rat& ci : c) coefs.push_back(rat_str(ci));
        for (const Rat& g : Y.gap_products) gaps.push_back(rat_str(g));
        Rat worst(0);
        for (const Rat& r : vandermonde_residual(Y.nodes, c))
            if (rat_abs(r) > worst) worst = rat_abs(r);
        j["nodes"] = std::move(nodes);
        j["coefficients"] = std::move(coefs);
        j["residual"] = rat_str(worst);
        j["gap_products"] = std::move(gaps);
    } else {
        require(sign == Sign::positive, errc::config, "log-alternant needs positive nodes");
        size_t n = 2 * static_cast<size_t>(N) - 1;
        DoublingSequence Y = extract_doubling(cfg.provider, sign, threshold, n);
        AlternantSolution sol = log_alternant_solve(Y.nodes, N, cfg.precision_bits);
        ordered_json nodes = ordered_json::array(), coefs = ordered_json::array(),
                     hexes = ordered_json::array(), gaps = ordered_json::array();
        for (const Rat& y : Y.nodes) nodes.push_back(rat_str(y));
        for (const Real& a : sol.a_tilde) {
            coefs.push_back(a.dec_str());
            hexes.push_back(a.hex_str());
        }
        for (const Rat& g : Y.gap_products) gaps.push_back(rat_str(g));
        j["nodes"] = std::move(nodes);
        j["coefficients"] = std::move(coefs);
        j["coefficients_hex"] = std::move(hexes);
        j["precision_bits"] = static_cast<long>(sol.precision_bits);
        j["residual"] = sol.residual.dec_str(24);
        j["growth_constant"] = sol.growth_constant;
        j["gap_products"] = std::move(gaps);
    }
    emit(out, j.dump(2) + "\n");
    return 0;
}

int cmd_approx(const RunConfig& cfg, const std::string& cert_path, const std::string& csv_path) {
    ApproxOptions opts;
    opts.grid_n = cfg.grid_n;
    opts.precision_bits = cfg.precision_bits;
    ApproxResult res = approximate(cfg.target, cfg.a, cfg.b, rat_double(cfg.epsilon), cfg.kernel,
                                   cfg.provider, opts);
    std::string cert_out = cert_path.empty() ? cfg.out_certificate : cert_path;
    std::string csv_out = csv_path.empty() ? cfg.out_samples : csv_path;
    emit(cert_out, certificate_json(res.cert, res.comb).dump(2) + "\n");
    if (!csv_out.empty()) write_file(csv_out, csv_samples(res.cert.samples));
    return res.cert.success ? 0 : 1;
}

int cmd_certify(const std::string& cert_path, const std::string& csv_path) {
    std::ifstream cin_(cert_path);
    require(cin_.good(), errc::config, "cannot open certificate: " + cert_path);
    ordered_json cert;
    try {
        cin_ >> cert;
    } catch (const std::exception& e) {
        fail(errc::config, std::string("certificate parse error: ") + e.what());
    }
    require(cert.contains("sup_error") && cert.contains("grid") && cert.contains("epsilon") &&
                cert.contains("success"),
            errc::config, "certificate missing required fields");

    std::ifstream s(csv_path);
    require(s.good(), errc::config, "cannot open samples: " + csv_path);
    std::string line;
    require(static_cast<bool>(std::getline(s, line)) && line == "x,f,s,abs_err", errc::config,
            "samples CSV must start with header x,f,s,abs_err");
    size_t rows = 0;
    double sup = 0;
    while (std::getline(s, line)) {
        if (line.empty()) continue;
        double x, f, sv, e;
        require(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &f, &sv, &e) == 4, errc::config,
                "malformed CSV row: " + line);
        require(e == std::fabs(f - sv), errc::config,
                "abs_err column does not match |f - s| at x = " + std::to_string(x));
        if (e > sup) sup = e;
        ++rows;
    }
    require(rows == cert["grid"].get<size_t>(), errc::config,
            "row count differs from certificate grid size");
    double claimed = cert["sup_error"].get<double>();
    if (sup != claimed) {
        std::cerr << "certify: sup_error mismatch: samples give " << sup << ", certificate claims "
                  << claimed << "\n";
        return 1;
    }
    bool success = cert["success"].get<bool>();
    if (success != (sup < cert["epsilon"].get<double>())) {
        std::cerr << "certify: success flag inconsistent with sup_error vs epsilon\n";
        return 1;
    }
    std::cout << "certificate consistent: sup_error " << sup << " over " << rows << " samples\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"scattered-translate expansion and approximation toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_path, cert_path, csv_path;
    std::string mode = "vandermonde", sign = "positive", threshold = "0";
    unsigned long k_max = 8;
    long N = 0;
    size_t count = 3;

    CLI::App* expand = app.add_subcommand("expand", "emit expansion polynomials as JSON");
    expand->add_option("--config", config_path, "JSON config")->required();
    expand->add_option("--kmax", k_max, "highest index to emit");
    expand->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* doubling = app.add_subcommand("doubling", "extract a doubling subsequence");
    doubling->add_option("--config", config_path, "JSON config")->required();
    doubling->add_option("--sign", sign, "positive|negative");
    doubling->add_option("--threshold", threshold, "extraction threshold M (rational)");
    doubling->add_option("--count", count, "nodes to extract");
    doubling->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* solve = app.add_subcommand("solve", "solve the translate coefficient system");
    solve->add_option("--config", config_path, "JSON config")->required();
    solve->add_option("--mode", mode, "vandermonde|log-alternant");
    solve->add_option("-N,--order", N, "system order")->required();
    solve->add_option("--sign", sign, "positive|negative");
    solve->add_option("--threshold", threshold, "extraction threshold M (rational)");
    solve->add_option("--out", out_path, "output path (default stdout)");

    CLI::App* approx = app.add_subcommand("approx", "run the approximation pipeline");
    approx->add_option("--config", config_path, "JSON config")->required();
    approx->add_option("--certificate", cert_path, "certificate JSON path (default stdout)");
    approx->add_option("--samples", csv_path, "samples CSV path");

    CLI::App* certify = app.add_subcommand("certify", "re-check a certificate against its CSV");
    certify->add_option("--certificate", cert_path, "certificate JSON path")->required();
    certify->add_option("--samples", csv_path, "samples CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (expand->parsed()) return cmd_expand(load_config(config_path), k_max, out_path);
        if (doubling->parsed())
            return cmd_doubling(load_config(config_path), sign, parse_rational(threshold), count,
                                out_path);
        if (solve->parsed())
            return cmd_solve(load_config(config_path), mode, N, sign, parse_rational(threshold),
                             out_path);
        if (approx->parsed()) return cmd_approx(load_config(config_path), cert_path, csv_path);
        if (certify->parsed()) return cmd_certify(cert_path, csv_path);
    } catch (const scatter::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return scatter::error::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
