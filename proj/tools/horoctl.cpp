// horoctl: command-line surface for orbit census, spectra, limit cones,
// transversality diagnostics, Poincare-series exponents, conformal
// densities, Burger-Roblin box checks, essential-subgroup witnesses, and
// the seeded lemma-verification suites.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "horo/alignment.hpp"
#include "horo/measures.hpp"
#include "horo/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerification = 2;
constexpr int kExitInput = 3;

std::size_t ball_cap_from_env() {
    const char* env = std::getenv("HORO_BALL_CAP");
    if (env == nullptr) return horo::kDefaultBallCap;
    try {
        const long long v = std::stoll(env);
        if (v < 1) throw std::invalid_argument("nonpositive");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        horo::raise(horo::ErrorCode::InvalidArgument,
                    "HORO_BALL_CAP must be a positive integer");
    }
}

horo::GroupSpec load_spec(const std::string& path) {
    if (path.empty()) return horo::bundled_fixture();
    return horo::GroupSpec::from_file(path);
}

horo::LinearForm parse_psi(const std::string& text, std::size_t r) {
    if (text.empty()) {
        // Uniform normalized form (1/r, ..., 1/r).
        return horo::LinearForm(horo::VectorR(r, 1.0 / static_cast<double>(r)));
    }
    horo::VectorR coeffs;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            coeffs.push_back(std::stod(item));
        } catch (const std::exception&) {
            horo::raise(horo::ErrorCode::InvalidArgument, "--psi expects comma-separated reals");
        }
    }
    if (coeffs.size() != r) {
        horo::raise(horo::ErrorCode::InvalidArgument,
                    "--psi must list exactly r = " + std::to_string(r) + " coefficients");
    }
    return horo::LinearForm(std::move(coeffs));
}

horo::VectorR parse_vector(const std::string& text, std::size_t r, const char* flag) {
    horo::VectorR out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            horo::raise(horo::ErrorCode::InvalidArgument,
                        std::string(flag) + " expects comma-separated reals");
        }
    }
    if (out.size() != r) {
        horo::raise(horo::ErrorCode::InvalidArgument,
                    std::string(flag) + " must list exactly r = " + std::to_string(r) +
                        " entries");
    }
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) {
        horo::raise(horo::ErrorCode::InvalidArgument, "cannot write " + path.string());
    }
    out << content;
}

void emit(const std::string& out_dir, const std::string& name, const std::string& content) {
    if (out_dir.empty()) {
        std::cout << content;
        if (!content.empty() && content.back() != '\n') std::cout << '\n';
    } else {
        write_file(std::filesystem::path(out_dir) / name, content);
    }
}

std::string census_csv(const horo::GroupSpec& spec, const std::vector<horo::GroupElement>& ball) {
    std::ostringstream out;
    out.precision(17);
    out << "word,length";
    for (std::size_t i = 0; i < spec.r; ++i) out << ",d" << (i + 1);
    out << '\n';
    for (const auto& e : ball) {
        out << e.word(spec) << ',' << e.word_length();
        for (double d : e.cartan) out << ',' << d;
        out << '\n';
    }
    return out.str();
}

std::string spectrum_json(const horo::SpectrumSample& sample) {
    json vectors = json::array();
    for (const auto& v : sample.vectors) vectors.push_back(v);
    return json{{"max_word_length", sample.max_word_length},
                {"count", sample.vectors.size()},
                {"vectors", vectors}}
        .dump(2);
}

std::string cone_csv(const std::vector<horo::VectorR>& samples) {
    std::ostringstream out;
    out.precision(17);
    if (!samples.empty()) {
        for (std::size_t i = 0; i < samples.front().size(); ++i) {
            out << (i > 0 ? "," : "") << "u" << (i + 1);
        }
        out << '\n';
    }
    for (const auto& v : samples) {
        for (std::size_t i = 0; i < v.size(); ++i) out << (i > 0 ? "," : "") << v[i];
        out << '\n';
    }
    return out.str();
}

std::string transverse_json(const horo::TransversalityReport& report) {
    return json{{"divergent_ok", report.divergent_ok},
                {"antipodal_ok", report.antipodal_ok},
                {"growth_floor_rate", report.growth_floor_rate},
                {"bucket_minima", report.bucket_minima},
                {"witnesses", report.witnesses}}
        .dump(2);
}

std::string delta_json(const horo::CriticalExponentEstimate& est) {
    return json{{"delta", est.delta},
                {"divergence_type_evidence", est.divergence_type_evidence},
                {"buckets_used", est.buckets_used},
                {"fit_window", {est.fit_tmin, est.fit_tmax}}}
        .dump(2);
}

const horo::GroupElement* find_generator(const horo::GroupSpec& spec,
                                         const std::vector<horo::GroupElement>& ball,
                                         const std::string& name) {
    for (const auto& e : ball) {
        if (e.word_length() == 1 && e.letters[0] > 0 &&
            spec.generator_names[static_cast<std::size_t>(e.letters[0]) - 1] == name) {
            return &e;
        }
    }
    horo::raise(horo::ErrorCode::InvalidArgument, "unknown generator: " + name);
}

struct BrCheck {
    double ratio = 0.0;
    double expected = 0.0;
    double rel_error = 0.0;
    horo::VectorR tau;
};

BrCheck br_quasi_invariance(const horo::GroupSpec& spec, const horo::LinearForm& psi, double delta,
                            const horo::AtomicMeasure& nu, const horo::GroupElement& phi) {
    BrCheck check;
    check.tau = horo::jordan_projection(phi);

    horo::BoxRegion region;
    region.boundary_cells = horo::canonical_cells(spec.r, 8);  // full support
    region.box.assign(spec.r, horo::Interval{0.0, 1.0});

    const double base = horo::br_box_measure(nu, delta, psi, region);
    const double shifted =
        horo::br_box_measure(nu, delta, psi, horo::translate_box(region, check.tau));
    check.ratio = shifted / base;
    check.expected = std::exp(delta * psi(check.tau));
    check.rel_error = std::abs(check.ratio / check.expected - 1.0);
    return check;
}

std::string br_check_json(const BrCheck& check) {
    return json{{"ratio", check.ratio},
                {"expected", check.expected},
                {"rel_error", check.rel_error},
                {"tau_phi", check.tau}}
        .dump(2);
}

long long default_trials(horo::LemmaId id) {
    switch (id) {
        case horo::LemmaId::ProjectionDefect: return 100000;
        case horo::LemmaId::Contracting: return 10000;
        case horo::LemmaId::ShadowAlignFwd: return 10000;
        case horo::LemmaId::ShadowAlignBwd: return 10000;
        case horo::LemmaId::AlignDichotomy: return 10000;
        case horo::LemmaId::Squeeze: return 10000;
        case horo::LemmaId::ShadowBuse: return 10000;
        case horo::LemmaId::Thin: return 1000;
        case horo::LemmaId::Cocycle: return 1000;
        case horo::LemmaId::AxisBounds: return 1000;
        default: return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"horoctl: desk-scale machinery for horospherical products"};
    app.require_subcommand(1);
    app.fallthrough();  // common flags may follow the subcommand name

    std::string spec_path, out_dir, psi_text;
    int L = 10;
    int workers = 1;
    app.add_option("--spec", spec_path, "group spec JSON (bundled fixture when omitted)");
    app.add_option("--psi", psi_text, "linear form coefficients a,b,...");
    app.add_option("--L", L, "word-ball radius");
    app.add_option("--out", out_dir, "output directory (stdout when omitted)");
    app.add_option("--workers", workers, "worker threads for seeded verification trials");

    auto* cmd_verify = app.add_subcommand("verify", "run one seeded lemma-verification suite");
    std::string lemma_name;
    long long trials = 0;
    std::uint64_t seed = 1;
    cmd_verify->add_option("--lemma", lemma_name, "lemma id")->required();
    cmd_verify->add_option("--trials", trials, "trial count (per-lemma default when 0)");
    cmd_verify->add_option("--seed", seed, "rng seed");

    auto* cmd_ball = app.add_subcommand("ball", "enumerate the word ball census");
    auto* cmd_spectrum = app.add_subcommand("spectrum", "vector length spectrum of the ball");
    auto* cmd_cone = app.add_subcommand("cone", "normalized Cartan directions");
    auto* cmd_transverse = app.add_subcommand("transverse", "transversality diagnostics");
    auto* cmd_delta = app.add_subcommand("delta", "critical exponent estimate");
    auto* cmd_density = app.add_subcommand("density", "atomic conformal density");
    double s_param = 0.0;
    cmd_density->add_option("--s", s_param, "exponent (delta + 0.01 when 0)");

    auto* cmd_residual = app.add_subcommand("residual", "conformality residual per cell");
    std::string generator_name;
    int cells = 64;
    cmd_residual->add_option("--generator", generator_name, "generator name (default: first)");
    cmd_residual->add_option("--cells", cells, "cells per factor");
    cmd_residual->add_option("--s", s_param, "exponent (delta + 0.01 when 0)");

    auto* cmd_br = app.add_subcommand("br-check", "Burger-Roblin quasi-invariance identity");
    auto* cmd_essential = app.add_subcommand("essential", "essential-subgroup witness search");
    std::string a_text, phi_name;
    double eps = 0.5;
    cmd_essential->add_option("--a", a_text, "target vector a,b,... (default tau_phi)");
    cmd_essential->add_option("--phi", phi_name, "loxodromic generator name (default: first)");
    cmd_essential->add_option("--eps", eps, "sup-norm tolerance");
    cmd_essential->add_option("--s", s_param, "exponent (delta + 0.01 when 0)");

    auto* cmd_pipeline = app.add_subcommand("pipeline", "full artifact set into --out");
    auto* cmd_fixture = app.add_subcommand("fixture", "print the bundled spec");
    bool single_factor = false;
    cmd_fixture->add_flag("--single-factor", single_factor, "first factor only");

    CLI11_PARSE(app, argc, argv);

    try {
        const std::size_t cap = ball_cap_from_env();

        if (cmd_fixture->parsed()) {
            const horo::GroupSpec spec =
                single_factor ? horo::bundled_single_factor() : horo::bundled_fixture();
            std::cout << spec.to_json_text() << '\n';
            return kExitOk;
        }

        if (cmd_verify->parsed()) {
            horo::VerifyJob job;
            job.lemma = horo::lemma_from_string(lemma_name);
            job.trials = trials > 0 ? trials : default_trials(job.lemma);
            job.seed = seed;
            job.workers = workers;
            if (!spec_path.empty()) job.spec = horo::GroupSpec::from_file(spec_path);
            const horo::Report report = horo::run_verify(job);
            emit(out_dir, "report.json", report.to_json_text());
            std::cerr << "verify " << report.lemma_id << ": failures " << report.failures
                      << ", wall " << report.wall_seconds << " s\n";
            return report.failures == 0 ? kExitOk : kExitVerification;
        }

        const horo::GroupSpec spec = load_spec(spec_path);

        if (cmd_ball->parsed()) {
            emit(out_dir, "census.csv", census_csv(spec, horo::enumerate_ball(spec, L, cap)));
            return kExitOk;
        }
        if (cmd_spectrum->parsed()) {
            emit(out_dir, "spectrum.json", spectrum_json(horo::length_spectrum(spec, L, cap)));
            return kExitOk;
        }
        if (cmd_cone->parsed()) {
            emit(out_dir, "cone.csv", cone_csv(horo::limit_cone_sample(spec, L, cap)));
            return kExitOk;
        }
        if (cmd_transverse->parsed()) {
            const horo::TransversalityReport report =
                horo::transversality_check(spec, L, 1e-6, cap);
            emit(out_dir, "transversality.json", transverse_json(report));
            return report.divergent_ok && report.antipodal_ok ? kExitOk : kExitVerification;
        }

        const horo::LinearForm psi = parse_psi(psi_text, spec.r);

        if (cmd_delta->parsed()) {
            emit(out_dir, "delta.json", delta_json(horo::critical_exponent(spec, psi, L, cap)));
            return kExitOk;
        }

        auto exponent_or_flag = [&]() {
            return s_param > 0.0 ? s_param
                                 : horo::critical_exponent(spec, psi, L, cap).delta + 0.01;
        };

        if (cmd_density->parsed()) {
            emit(out_dir, "density.json",
                 horo::ps_density(spec, psi, exponent_or_flag(), L, cap).to_json_text());
            return kExitOk;
        }
        if (cmd_residual->parsed()) {
            const auto ball1 = horo::enumerate_ball(spec, 1, cap);
            const horo::GroupElement* gen = find_generator(
                spec, ball1, generator_name.empty() ? spec.generator_names.front() : generator_name);
            const horo::ResidualReport report = horo::conformality_residual(
                spec, psi, exponent_or_flag(), L, *gen, cells, cap);
            emit(out_dir, "residual.csv", report.to_csv());
            return kExitOk;
        }
        if (cmd_br->parsed()) {
            const auto ball1 = horo::enumerate_ball(spec, 1, cap);
            const horo::GroupElement* phi =
                find_generator(spec, ball1, spec.generator_names.front());
            const double delta = horo::critical_exponent(spec, psi, L, cap).delta;
            const horo::AtomicMeasure nu = horo::ps_density(spec, psi, delta + 0.01, L, cap);
            const BrCheck check = br_quasi_invariance(spec, psi, delta, nu, *phi);
            emit(out_dir, "br_check.json", br_check_json(check));
            return check.rel_error < 1e-9 ? kExitOk : kExitVerification;
        }
        if (cmd_essential->parsed()) {
            const auto ball1 = horo::enumerate_ball(spec, 1, cap);
            const horo::GroupElement* phi = find_generator(
                spec, ball1, phi_name.empty() ? spec.generator_names.front() : phi_name);
            const horo::VectorR target =
                a_text.empty() ? horo::jordan_projection(*phi) : parse_vector(a_text, spec.r, "--a");
            const horo::AtomicMeasure nu =
                horo::ps_density(spec, psi, exponent_or_flag(), L, cap);
            const auto witness = horo::essential_witness(
                spec, nu, horo::canonical_cells(spec.r, 8), *phi, target, eps, L, cap);
            json result{{"eps", eps}, {"a", target}};
            result["witness"] = witness ? json(witness->word(spec)) : json(nullptr);
            emit(out_dir, "essential.json", result.dump(2));
            return witness ? kExitOk : kExitVerification;
        }

        if (cmd_pipeline->parsed()) {
            if (out_dir.empty()) {
                horo::raise(horo::ErrorCode::InvalidArgument, "pipeline requires --out");
            }
            const auto ball = horo::enumerate_ball(spec, L, cap);
            emit(out_dir, "census.csv", census_csv(spec, ball));

            json status = json::object();
            status["census"] = "ok";
            if (L < 6) {
                for (const char* step :
                     {"spectrum", "non_arithmeticity", "cone", "transversality", "delta",
                      "density", "residual", "br_check"}) {
                    status[step] = "refused: InsufficientGrowthData (L < 6)";
                }
                emit(out_dir, "pipeline.json", status.dump(2));
                return kExitOk;
            }

            const horo::SpectrumSample sample = horo::length_spectrum(spec, L, cap);
            emit(out_dir, "spectrum.json", spectrum_json(sample));
            status["spectrum"] = "ok";

            const horo::NonArithmeticityReport nar =
                horo::non_arithmeticity_report(sample, 1e-3, 12);
            emit(out_dir, "nonarith.json",
                 json{{"dense_heuristic", nar.dense_heuristic},
                      {"rank", nar.rank},
                      {"lattice_covolume", std::isfinite(nar.lattice_covolume)
                                               ? json(nar.lattice_covolume)
                                               : json(nullptr)}}
                     .dump(2));
            status["non_arithmeticity"] = "ok";

            emit(out_dir, "cone.csv", cone_csv(horo::limit_cone_sample(spec, L, cap)));
            status["cone"] = "ok";

            const horo::TransversalityReport transverse =
                horo::transversality_check(spec, L, 1e-6, cap);
            emit(out_dir, "transversality.json", transverse_json(transverse));
            status["transversality"] = transverse.divergent_ok && transverse.antipodal_ok
                                           ? "ok"
                                           : "failed";

            const horo::CriticalExponentEstimate est =
                horo::critical_exponent(spec, psi, L, cap);
            emit(out_dir, "delta.json", delta_json(est));
            status["delta"] = "ok";

            const double s = est.delta + 0.01;
            const horo::AtomicMeasure nu = horo::ps_density(spec, psi, s, L, cap);
            emit(out_dir, "density.json", nu.to_json_text());
            status["density"] = "ok";

            std::ostringstream residuals;
            residuals << "generator,cell_id,mass,image_mass,residual\n";
            residuals.precision(17);
            for (const auto& name : spec.generator_names) {
                const auto ball1 = horo::enumerate_ball(spec, 1, cap);
                const horo::GroupElement* gen = find_generator(spec, ball1, name);
                const horo::ResidualReport rr =
                    horo::conformality_residual(spec, psi, s, L, *gen, 64, cap);
                for (const auto& cell : rr.cells) {
                    residuals << name << ',' << cell.cell_id << ',' << cell.mass << ','
                              << cell.image_mass << ',' << cell.residual << '\n';
                }
            }
            emit(out_dir, "residual.csv", residuals.str());
            status["residual"] = "ok";

            const auto ball1 = horo::enumerate_ball(spec, 1, cap);
            const horo::GroupElement* phi =
                find_generator(spec, ball1, spec.generator_names.front());
            const BrCheck check = br_quasi_invariance(spec, psi, est.delta, nu, *phi);
            emit(out_dir, "br_check.json", br_check_json(check));
            status["br_check"] = check.rel_error < 1e-9 ? "ok" : "failed";

            emit(out_dir, "pipeline.json", status.dump(2));
            return kExitOk;
        }
    } catch (const horo::Error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitInput;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitInput;
    }
    return kExitOk;
}
