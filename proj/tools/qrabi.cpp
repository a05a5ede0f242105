// Command-line front end: spectrum sweeps, phase-space grid export, state
// dumps, and the self-check battery. Exit codes: 0 success, 1 runtime
// failure (including failed verification), 2 usage/config/validation.

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qrabi/eigensolver.hpp"
#include "qrabi/io.hpp"
#include "qrabi/models.hpp"
#include "qrabi/perturbation.hpp"
#include "qrabi/states.hpp"
#include "qrabi/verify.hpp"
#include "qrabi/wigner.hpp"

namespace {

namespace fs = std::filesystem;
using namespace qrabi;

struct CliConfig {
    std::string model = "r1";
    double omega = 1.0;
    double b_field = 0.1;
    double phi = 7.0 * pi / 6.0;
    double lambda = 0.5;
    std::string lambda_range;  // "start:stop:steps"
    int truncation = 30;
    std::string kind = "q2b";
    int k = 0;
    double alpha = 1.0;
    std::string section = "diag";
    int b_coord = 0;
    double extent = 2.5;
    int resolution = 61;
    double diag_scale = 1.0 / std::sqrt(2.0);
    std::string out = ".";
    std::string config_path;

    ModelParams params() const { return ModelParams{omega, b_field, phi, lambda}; }
};

double to_double(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size()) return v;
    } catch (...) {
    }
    fail_valid("cannot parse " + what + " value: " + s);
}

int to_int(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos == s.size()) return v;
    } catch (...) {
    }
    fail_valid("cannot parse " + what + " value: " + s);
}

// Fill values from the flat key=value config file for every flag the command
// line did not set explicitly (command line wins).
void apply_config_file(CLI::App& app, CliConfig& cfg) {
    if (cfg.config_path.empty()) return;
    const auto kv = parse_config_file(cfg.config_path);
    const std::map<std::string, std::function<void(const std::string&)>> setters{
        {"model", [&](const std::string& v) { cfg.model = v; }},
        {"omega", [&](const std::string& v) { cfg.omega = to_double(v, "omega"); }},
        {"b_field", [&](const std::string& v) { cfg.b_field = to_double(v, "b_field"); }},
        {"phi", [&](const std::string& v) { cfg.phi = to_double(v, "phi"); }},
        {"lambda", [&](const std::string& v) { cfg.lambda = to_double(v, "lambda"); }},
        {"lambda_range", [&](const std::string& v) { cfg.lambda_range = v; }},
        {"truncation",
         [&](const std::string& v) { cfg.truncation = to_int(v, "truncation"); }},
        {"kind", [&](const std::string& v) { cfg.kind = v; }},
        {"k", [&](const std::string& v) { cfg.k = to_int(v, "k"); }},
        {"alpha", [&](const std::string& v) { cfg.alpha = to_double(v, "alpha"); }},
        {"section", [&](const std::string& v) { cfg.section = v; }},
        {"b_coord", [&](const std::string& v) { cfg.b_coord = to_int(v, "b_coord"); }},
        {"extent", [&](const std::string& v) { cfg.extent = to_double(v, "extent"); }},
        {"resolution",
         [&](const std::string& v) { cfg.resolution = to_int(v, "resolution"); }},
        {"diag_scale",
         [&](const std::string& v) { cfg.diag_scale = to_double(v, "diag_scale"); }},
        {"out", [&](const std::string& v) { cfg.out = v; }},
    };
    for (const auto& [key, value] : kv) {
        const auto it = setters.find(key);
        if (it == setters.end()) fail_valid("unknown config key: " + key);
        std::string flag = "--" + key;
        for (auto& c : flag)
            if (c == '_') c = '-';
        if (app.count(flag) == 0) it->second(value);
    }
}

std::vector<double> coupling_grid(const CliConfig& cfg) {
    if (cfg.lambda_range.empty()) return {cfg.lambda};
    const auto c1 = cfg.lambda_range.find(':');
    const auto c2 = c1 == std::string::npos ? c1 : cfg.lambda_range.find(':', c1 + 1);
    require_valid(c1 != std::string::npos && c2 != std::string::npos,
                  "lambda range must be start:stop:steps");
    const double lo = to_double(cfg.lambda_range.substr(0, c1), "lambda range start");
    const double hi = to_double(cfg.lambda_range.substr(c1 + 1, c2 - c1 - 1),
                                "lambda range stop");
    const int n = to_int(cfg.lambda_range.substr(c2 + 1), "lambda range steps");
    require_valid(n >= 1, "lambda range needs at least one step");
    if (n == 1) return {lo};
    require_valid(hi > lo, "lambda range stop must exceed start");
    return uniform_grid(lo, hi, n);
}

int cmd_spectrum(const CliConfig& cfg) {
    const ModelId model = parse_model(cfg.model);
    const SpectrumResult res =
        spectrum_sweep(model, cfg.params(), coupling_grid(cfg), cfg.truncation);
    std::string csv = "lambda,exact_e0,exact_e1,exact_e2,pert_k0,pert_k1,pert_k2\n";
    for (size_t i = 0; i < res.lambda_grid.size(); ++i) {
        csv += format_g12(res.lambda_grid[i]);
        for (int t = 0; t < 3; ++t) csv += "," + format_g12(res.exact[i][t]);
        for (int k = 0; k < 3; ++k) csv += "," + format_g12(res.pert[i][k]);
        csv += "\n";
    }
    const fs::path path = fs::path(cfg.out) / "spectrum.csv";
    write_text_atomic(path, csv);
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

DensityMatrix wigner_target(const CliConfig& cfg) {
    if (cfg.kind == "ground") {
        const ModelId model = parse_model(cfg.model);
        require_valid(boson_mode_count(model) == 2,
                      "ground-state sections need a two-mode model");
        const Operator H = build_hamiltonian(model, cfg.params(), cfg.truncation);
        std::vector<EigenPair> gs = lowest_eigenpairs(H, 1, 1e-9);
        return pure_density(StateVector{H.space, std::move(gs[0].vector)});
    }
    const cplx alpha(cfg.alpha, 0.0);
    if (cfg.kind == "q2b")
        return pure_density(cat_state(CatKind::Q2B, cfg.truncation, alpha, cfg.k));
    if (cfg.kind == "b2")
        return pure_density(cat_state(CatKind::B2, cfg.truncation, alpha, cfg.k));
    if (cfg.kind == "mix")
        return reference_density(ReferenceKind::Mix, cfg.truncation, alpha, cfg.k);
    if (cfg.kind == "product")
        return reference_density(ReferenceKind::Product, cfg.truncation, alpha, cfg.k);
    fail_valid("unknown wigner kind: " + cfg.kind +
               " (expected ground, q2b, b2, mix or product)");
}

PlaneSection make_section(const CliConfig& cfg) {
    if (cfg.section == "diag") return PlaneSection::diag(cfg.diag_scale);
    if (cfg.section == "fringe") return PlaneSection::fringe(cfg.b_coord);
    fail_valid("unknown section: " + cfg.section + " (expected diag or fringe)");
}

int cmd_wigner(const CliConfig& cfg) {
    const PlaneSection section = make_section(cfg);
    const DensityMatrix rho = wigner_target(cfg);
    const WignerGrid grid = wigner_grid(rho, section, cfg.extent, cfg.resolution);

    const fs::path dir(cfg.out);
    auto grid_csv = [&](const std::function<double(long)>& value) {
        std::string csv = "re_w,im_w,value\n";
        for (long i = 0; i < static_cast<long>(grid.w.size()); ++i)
            csv += format_g12(grid.w[i].real()) + "," + format_g12(grid.w[i].imag()) + "," +
                   format_g12(value(i)) + "\n";
        return csv;
    };
    if (!grid.panels.empty()) {
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const fs::path path =
                    dir / ("wigner_a" + std::to_string(a) + "_b" + std::to_string(b) + ".csv");
                write_text_atomic(
                    path, grid_csv([&](long i) { return grid.panels[i][a * 3 + b]; }));
                std::cout << "wrote " << path.string() << "\n";
            }
    } else {
        const fs::path path = dir / "wigner.csv";
        write_text_atomic(path, grid_csv([&](long i) { return grid.values[i]; }));
        std::cout << "wrote " << path.string() << "\n";
    }

    std::string meta;
    meta += "model=" + cfg.model + "\n";
    meta += "omega=" + format_g12(cfg.omega) + "\n";
    meta += "b_field=" + format_g12(cfg.b_field) + "\n";
    meta += "phi=" + format_g12(cfg.phi) + "\n";
    meta += "lambda=" + format_g12(cfg.lambda) + "\n";
    meta += "truncation=" + std::to_string(cfg.truncation) + "\n";
    meta += "kind=" + cfg.kind + "\n";
    meta += "k=" + std::to_string(cfg.k) + "\n";
    meta += "alpha=" + format_g12(cfg.alpha) + "\n";
    meta += "extent=" + format_g12(cfg.extent) + "\n";
    meta += "resolution=" + std::to_string(cfg.resolution) + "\n";
    meta += section.describe() + "\n";
    meta += "grid=w = x + i*y; x and y sampled uniformly on [-extent, extent], y in the "
            "outer loop ascending, x in the inner loop ascending\n";
    write_text_atomic(dir / "meta.txt", meta);
    std::cout << "wrote " << (dir / "meta.txt").string() << "\n";
    return 0;
}

int cmd_state(const CliConfig& cfg) {
    const cplx alpha(cfg.alpha, 0.0);
    StateVector state{HilbertSpace{}, {}};
    if (cfg.kind == "coherent")
        state = coherent_state(cfg.truncation, alpha);
    else if (cfg.kind == "z2")
        state = cat_state(CatKind::Z2, cfg.truncation, alpha, cfg.k);
    else if (cfg.kind == "qb1")
        state = cat_state(CatKind::QB1, cfg.truncation, alpha, cfg.k);
    else if (cfg.kind == "q2b")
        state = cat_state(CatKind::Q2B, cfg.truncation, alpha, cfg.k);
    else if (cfg.kind == "b2")
        state = cat_state(CatKind::B2, cfg.truncation, alpha, cfg.k);
    else
        fail_valid("unknown state kind: " + cfg.kind +
                   " (expected coherent, z2, qb1, q2b or b2)");

    std::vector<std::string> cols;
    int modes_seen = 0;
    const int total_modes = state.space.count(Factor::Fock);
    for (const Factor& f : state.space.factors) {
        if (f.kind == Factor::Qutrit)
            cols.push_back("j");
        else
            cols.push_back(total_modes == 1 ? "n" : "n" + std::to_string(++modes_seen));
    }
    std::string csv = "index";
    for (const auto& c : cols) csv += "," + c;
    csv += ",re,im\n";
    for (long i = 0; i < state.space.dim(); ++i) {
        csv += std::to_string(i);
        for (int occ : state.space.unflatten(i)) csv += "," + std::to_string(occ);
        csv += "," + format_g12(state.amplitudes[i].real()) + "," +
               format_g12(state.amplitudes[i].imag()) + "\n";
    }
    const fs::path path = fs::path(cfg.out) / "state.csv";
    write_text_atomic(path, csv);
    std::cout << "wrote " << path.string() << "\n";
    return 0;
}

int cmd_verify(const CliConfig& cfg) {
    const VerifyReport rep = run_verification(cfg.params(), cfg.truncation);
    const std::string text = rep.render();
    const fs::path path = fs::path(cfg.out) / "verify.txt";
    write_text_atomic(path, text);
    std::cout << text;
    return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CliConfig cfg;
    CLI::App app{"Z3-symmetric qutrit-boson models: spectra, cat states and joint "
                 "phase-space distributions"};
    app.add_option("--model", cfg.model, "model: r1, r2, r2p or alt");
    app.add_option("--omega", cfg.omega, "mode frequency");
    app.add_option("--b-field", cfg.b_field, "three-level term strength");
    app.add_option("--phi", cfg.phi, "three-level term phase");
    app.add_option("--lambda", cfg.lambda, "coupling strength");
    app.add_option("--lambda-range", cfg.lambda_range, "coupling grid start:stop:steps");
    app.add_option("--truncation", cfg.truncation, "Fock truncation per mode");
    app.add_option("--kind", cfg.kind, "state kind (see each command)");
    app.add_option("--k", cfg.k, "symmetry/cat index");
    app.add_option("--alpha", cfg.alpha, "coherent amplitude (real)");
    app.add_option("--section", cfg.section, "phase-space section: diag or fringe");
    app.add_option("--b-coord", cfg.b_coord, "fringe family index");
    app.add_option("--extent", cfg.extent, "grid half-width in w");
    app.add_option("--resolution", cfg.resolution, "grid samples per axis");
    app.add_option("--diag-scale", cfg.diag_scale, "scale s of the diag section");
    app.add_option("--out", cfg.out, "output directory");
    app.add_option("--config", cfg.config_path, "flat key=value config file");

    CLI::App* sc_spectrum =
        app.add_subcommand("spectrum", "coupling sweep: exact triplet vs closed form");
    CLI::App* sc_wigner =
        app.add_subcommand("wigner", "phase-space section grids (nine qutrit panels)");
    CLI::App* sc_verify = app.add_subcommand("verify", "run the self-check battery");
    CLI::App* sc_state = app.add_subcommand("state", "dump state amplitudes as CSV");
    for (CLI::App* sc : {sc_spectrum, sc_wigner, sc_verify, sc_state}) sc->fallthrough();
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        apply_config_file(app, cfg);
        if (sc_spectrum->parsed()) return cmd_spectrum(cfg);
        if (sc_wigner->parsed()) return cmd_wigner(cfg);
        if (sc_state->parsed()) return cmd_state(cfg);
        return cmd_verify(cfg);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
