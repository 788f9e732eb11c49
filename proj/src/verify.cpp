#include "horo/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <thread>
#include <vector>

#include <json.hpp>

#include "horo/alignment.hpp"
#include "horo/rng.hpp"

namespace horo {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Point at hyperbolic distance rho from center, leaving in direction theta
// (theta = 0 points up at the normalized center i).
H2Point polar_point(const H2Point& center, double theta, double rho) {
    // Around i the distance-rho circle is Euclidean: center i cosh(rho),
    // radius sinh(rho).
    H2Point p;
    p.re = std::sinh(rho) * std::sin(theta);
    p.im = std::cosh(rho) + std::sinh(rho) * std::cos(theta);
    const double s = std::sqrt(center.im);
    const IsometryH2 to_center = IsometryH2::unchecked(s, center.re / s, 0.0, 1.0 / s);
    return to_center.apply(p);
}

H2Point fiber_point(const GeodesicH2& gamma, double s, double h, double side) {
    const double phi = std::atan(std::sinh(h));
    H2Point p;
    p.re = std::exp(s) * std::sin(phi) * side;
    p.im = std::exp(s) * std::cos(phi);
    return gamma.chart().apply(p);
}

struct TrialOutcome {
    bool failed = false;
    double value = 0.0;  // lemma-specific magnitude for worst-case tracking
    std::string note;
};

struct Accumulated {
    long long failures = 0;
    double worst = -std::numeric_limits<double>::infinity();
    std::string worst_note;

    void feed(const TrialOutcome& t) {
        if (t.failed) ++failures;
        if (t.value > worst) {
            worst = t.value;
            worst_note = t.note;
        }
    }

    void merge(const Accumulated& other) {
        failures += other.failures;
        if (other.worst > worst) {
            worst = other.worst;
            worst_note = other.worst_note;
        }
    }
};

TrialOutcome trial_thin(Rng& rng, const VerifyTolerances& tol) {
    const H2Point a = sample_point(rng);
    H2Point b = sample_point(rng);
    for (int guard = 0; dist(a, b) < 0.5 && guard < 64; ++guard) b = sample_point(rng);
    const double C = rng.uniform(0.1, 2.0);
    const H2Point a2 = polar_point(a, rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, C));
    const H2Point b2 = polar_point(b, rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, C));

    const SegmentH2 s1(a, b), s2(a2, b2);
    double hausdorff = 0.0;
    auto one_side = [&](const SegmentH2& from, const SegmentH2& to) {
        const double len = dist(from.start, from.end);
        const int steps = std::max(2, static_cast<int>(std::ceil(len / 0.01)));
        const SegmentChart chart = segment_chart(from);
        for (int k = 0; k <= steps; ++k) {
            const double t = chart.t_start + (chart.t_end - chart.t_start) * k / steps;
            hausdorff = std::max(hausdorff, dist_to_segment(to, chart.carrier.point_at(t)));
        }
    };
    one_side(s1, s2);
    one_side(s2, s1);

    TrialOutcome out;
    out.value = hausdorff - C;
    out.note = "hausdorff - C";
    out.failed = hausdorff > C + tol.hausdorff_slack;
    return out;
}

TrialOutcome trial_contracting(Rng& rng, const VerifyTolerances& tol) {
    const GeodesicH2 gamma = sample_geodesic(rng);
    const double tx = rng.uniform(-4.0, 4.0);
    const double gap = rng.uniform(2.05, 8.0);
    const double ty = tx + (rng.coin() ? gap : -gap);
    const H2Point x = fiber_point(gamma, tx, rng.uniform(0.0, 4.0), rng.coin() ? 1.0 : -1.0);
    const H2Point y = fiber_point(gamma, ty, rng.uniform(0.0, 4.0), rng.coin() ? 1.0 : -1.0);

    const Projection px = project_to_geodesic(gamma, x);
    const Projection py = project_to_geodesic(gamma, y);
    if (std::abs(px.param - py.param) <= 2.0) {
        return TrialOutcome{};  // fiber construction jittered under the gap; skip
    }
    const auto [p, q] = contracting_decomposition(gamma, x, y);

    const double slack = tol.contracting_slack;
    bool ok = dist_to_segment(SegmentH2(x, y), p) <= slack &&
              dist_to_segment(SegmentH2(x, y), q) <= slack &&
              dist(x, p) <= dist(x, q) + 1e-9;

    // Two-equivalence of [proj x, proj y] and [p, q].
    const double eq = std::max(dist(px.foot, p), dist(py.foot, q));
    ok = ok && eq < 2.0 + slack;

    // Projected prefix diameters by dense sampling at arclength step 0.01.
    double worst_diam = 0.0;
    auto prefix_diam = [&](const H2Point& from, const H2Point& tip) {
        if (dist(from, tip) < 1e-12) return 0.0;
        const SegmentChart chart = segment_chart(SegmentH2(from, tip));
        const double len = std::abs(chart.t_end - chart.t_start);
        const int steps = std::max(2, static_cast<int>(std::ceil(len / 0.01)));
        double lo = std::numeric_limits<double>::infinity(), hi = -lo;
        for (int k = 0; k <= steps; ++k) {
            const double t = chart.t_start + (chart.t_end - chart.t_start) * k / steps;
            const double foot = project_to_geodesic(gamma, chart.carrier.point_at(t)).param;
            lo = std::min(lo, foot);
            hi = std::max(hi, foot);
        }
        double diam = hi - lo;
        diam = std::max(diam, dist(tip, gamma.point_at(lo)));
        diam = std::max(diam, dist(tip, gamma.point_at(hi)));
        return diam;
    };
    worst_diam = std::max(prefix_diam(x, p), prefix_diam(y, q));
    ok = ok && worst_diam <= 2.0 + slack;

    TrialOutcome out;
    out.value = std::max(worst_diam, eq);
    out.note = "max(prefix diameter, equivalence defect)";
    out.failed = !ok;
    return out;
}

TrialOutcome trial_projection_defect(Rng& rng, const VerifyTolerances& tol) {
    const GeodesicH2 gamma = sample_geodesic(rng);
    const H2Point x = sample_point(rng);
    const double t = project_to_geodesic(gamma, x).param;
    const double s = t + rng.uniform(-20.0, 20.0);
    const double defect = projection_defect_check(gamma, x, s);
    TrialOutcome out;
    out.value = defect;
    out.note = "projection defect";
    out.failed = defect > tol.defect_bound;
    return out;
}

TrialOutcome trial_align_dichotomy(Rng& rng, const VerifyTolerances&) {
    const GeodesicH2 gamma = sample_geodesic(rng);
    const double length = rng.uniform(0.5, 8.0);
    const double t0 = rng.uniform(-2.0, 2.0);
    const SegmentH2 seg(gamma.point_at(t0), gamma.point_at(t0 + length));
    const H2Point x = sample_point(rng);
    const double D = rng.uniform(0.0, length);

    // (gamma, x) D-aligned together with (x, gamma) (length - D)-aligned is
    // impossible: the two defects sum to the segment length exactly.
    const bool tail_aligned = is_aligned(x, seg.reversed(), D).aligned;
    const bool head_aligned = is_aligned(x, seg, length - D).aligned;
    TrialOutcome out;
    out.value = tail_aligned && head_aligned ? 1.0 : 0.0;
    out.note = "both sides aligned";
    out.failed = tail_aligned && head_aligned;
    return out;
}

// Mixed sampler for the shadow/alignment conversion: half the draws follow
// a common geodesic with moderate offsets so the antecedents are exercised,
// half are fully random.
void sample_shadow_config(Rng& rng, H2Point out[4]) {
    if (rng.coin()) {
        const GeodesicH2 gamma = sample_geodesic(rng);
        double t = rng.uniform(-6.0, 0.0);
        for (int i = 0; i < 4; ++i) {
            out[i] = fiber_point(gamma, t, rng.uniform(0.0, 1.5), rng.coin() ? 1.0 : -1.0);
            t += rng.uniform(1.0, 6.0);
        }
    } else {
        for (int i = 0; i < 4; ++i) out[i] = sample_point(rng);
    }
}

TrialOutcome trial_shadow_align(Rng& rng, const VerifyTolerances&, bool forward) {
    H2Point pts[4];
    sample_shadow_config(rng, pts);
    const double R = rng.uniform(1.01, 5.0);
    if (dist(pts[1], pts[2]) < 1e-6) return TrialOutcome{};
    const ShadowAlignmentCheck check =
        verify_shadow_alignment(pts[0], pts[1], pts[2], pts[3], R);
    TrialOutcome out;
    const bool ok = forward ? check.forward_ok : check.backward_ok;
    out.value = ok ? 0.0 : 1.0;
    out.note = forward ? "forward implication" : "backward implication";
    out.failed = !ok;
    return out;
}

TrialOutcome trial_axis_bounds(Rng& rng, const VerifyTolerances&) {
    const IsometryH2 g = sample_loxodromic(rng, 1.0);
    const H2Point basepoint = sample_point(rng);
    const AxisConstant ac = axis_constant(g, basepoint, 8);
    const double tau = translation_length_axis(g).translation_length;
    const double s0 = project_to_geodesic(ac.axis, basepoint).param;

    TrialOutcome out;
    out.note = "axis window violation";
    for (int probe = 0; probe < 8; ++probe) {
        const int k = 1 + static_cast<int>(rng.below(8));
        const SegmentH2 seg(basepoint, power(g, k).apply(basepoint));
        if (seg.degenerate()) continue;
        const H2Point x = sample_point(rng);
        const double foot = project_to_geodesic(ac.axis, x).param - s0;

        const double K2 = ac.C + rng.uniform(0.0, 5.0);
        if (!is_aligned(x, seg, K2).aligned && foot < K2 - ac.C) {
            out.failed = true;
            out.value = (K2 - ac.C) - foot;
            return out;
        }
        const double upper = tau * k - ac.C;
        if (upper > 0.0) {
            const double K3 = rng.uniform(0.0, upper);
            if (is_aligned(x, seg, K3).aligned && foot > K3 + ac.C) {
                out.failed = true;
                out.value = foot - (K3 + ac.C);
                return out;
            }
        }
    }
    return out;
}

TrialOutcome trial_cocycle(Rng& rng, const VerifyTolerances& tol) {
    const BoundaryPointH2 xi = sample_boundary(rng);
    const H2Point x = sample_point(rng);
    const H2Point y = sample_point(rng);
    const H2Point z = sample_point(rng);
    const double cocycle_defect =
        std::abs(busemann(xi, x, z) - busemann(xi, x, y) - busemann(xi, y, z));

    // Limit-definition cross-check along the ray from the basepoint, t = 40.
    const RayH2 ray = ray_from(H2Point(0.0, 1.0), xi);
    const H2Point far = ray.carrier.point_at(ray.start_param + 40.0);
    const double limit_defect = std::abs(busemann(xi, x, y) - (dist(x, far) - dist(y, far)));

    TrialOutcome out;
    out.value = std::max(cocycle_defect, limit_defect / (tol.closed_vs_limit / tol.cocycle));
    out.note = "max(cocycle defect, scaled limit defect)";
    out.failed = cocycle_defect > tol.cocycle || limit_defect > tol.closed_vs_limit;
    return out;
}

TrialOutcome trial_shadow_buse(Rng& rng, const VerifyTolerances& tol) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        const H2Point x = sample_point(rng);
        const H2Point y = sample_point(rng);
        const double R = rng.uniform(0.3, 3.0);
        const BoundaryPointH2 xi = sample_boundary(rng);
        if (!shadow_contains(x, y, R, xi)) continue;
        const double b = busemann(xi, x, y);
        const double d = dist(x, y);
        TrialOutcome out;
        out.value = std::max(b - d, (d - 2.0 * R) - b);
        out.note = "sandwich defect";
        out.failed = b < d - 2.0 * R - tol.shadow_buse || b > d + tol.shadow_buse;
        return out;
    }
    return TrialOutcome{};  // no member found; vacuous trial
}

Accumulated run_trials(const VerifyJob& job,
                       TrialOutcome (*trial)(Rng&, const VerifyTolerances&)) {
    const int workers = std::max(1, job.workers);
    auto chunk = [&](long long begin, long long end) {
        Accumulated acc;
        for (long long t = begin; t < end; ++t) {
            Rng rng(job.seed, static_cast<std::uint64_t>(t));
            acc.feed(trial(rng, job.tolerances));
        }
        return acc;
    };
    if (workers == 1) return chunk(0, job.trials);

    std::vector<std::future<Accumulated>> futures;
    const long long per = (job.trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long long begin = w * per;
        const long long end = std::min(job.trials, begin + per);
        if (begin >= end) break;
        futures.push_back(std::async(std::launch::async, chunk, begin, end));
    }
    Accumulated acc;
    for (auto& f : futures) acc.merge(f.get());
    return acc;
}

// d(O, opposite side) for the pi/2-0-0 ideal triangle, built explicitly:
// vertex i, ideal vertices infinity (up the axis) and 1 (along the unit
// circle); the opposite side is the geodesic (1, infinity).
double appendix_triangle_distance() {
    const GeodesicH2 opposite(BoundaryPointH2(1.0), BoundaryPointH2::infinity());
    return dist_to_geodesic(opposite, H2Point(0.0, 1.0));
}

Accumulated run_appendix(const VerifyJob& job) {
    const double measured = appendix_triangle_distance();
    const double pinned = 2.0 * std::atanh(1.0 - 1.0 / std::sqrt(2.0));
    Accumulated acc;
    TrialOutcome out;
    out.value = measured;
    out.note = "measured vertex-to-side distance";
    out.failed = std::abs(measured - pinned) > job.tolerances.appendix;
    acc.feed(out);
    return acc;
}

// Componentwise-shadow diagnostic on the fixture: for pairs (g, h = g w)
// with the first factor of h z0 in the R = 2 shadow of g z0, the other
// factors land in a shadow of radius R'; R' must be finite and stable in L.
Accumulated run_simultaneous_shadow(const VerifyJob& job) {
    const GroupSpec spec = job.spec ? *job.spec : bundled_fixture();
    constexpr double kR = 2.0;
    Accumulated acc;
    double rprime_min = std::numeric_limits<double>::infinity();
    double rprime_max = -std::numeric_limits<double>::infinity();

    for (int L : {6, 8, 10}) {
        const auto core = enumerate_ball(spec, L - 2);
        const auto tails = enumerate_ball(spec, 2);
        double rprime = -std::numeric_limits<double>::infinity();
        long long qualifying = 0;
        for (const auto& g : core) {
            const ProductPoint gz = g.matrix.apply(spec.basepoint);
            for (const auto& w : tails) {
                if (w.letters.empty()) continue;
                const ProductIsometry h = g.matrix * w.matrix;
                const ProductPoint hz = h.apply(spec.basepoint);
                if (!shadow_contains(spec.basepoint.components[0], gz.components[0], kR,
                                     hz.components[0])) {
                    continue;
                }
                ++qualifying;
                for (std::size_t i = 1; i < spec.r; ++i) {
                    rprime = std::max(
                        rprime, dist_to_segment(
                                    SegmentH2(spec.basepoint.components[i], hz.components[i]),
                                    gz.components[i]));
                }
            }
        }
        TrialOutcome out;
        out.value = rprime;
        out.note = "R' at L=" + std::to_string(L) + " over " + std::to_string(qualifying) +
                   " qualifying pairs";
        out.failed = qualifying == 0 || !std::isfinite(rprime);
        acc.feed(out);
        rprime_min = std::min(rprime_min, rprime);
        rprime_max = std::max(rprime_max, rprime);
    }
    if (rprime_max - rprime_min > job.tolerances.stability_window) {
        TrialOutcome out;
        out.failed = true;
        out.value = rprime_max - rprime_min;
        out.note = "R' spread across L exceeds the stability window";
        acc.feed(out);
    }
    return acc;
}

// Factor-divergence diagnostic: calibrate R'(R) on the smaller ball, then
// verify on the full ball that d_1 > R' forces min_i d_i > R.
Accumulated run_div_factors(const VerifyJob& job) {
    const GroupSpec spec = job.spec ? *job.spec : bundled_fixture();
    const int L = 10;
    const auto core = enumerate_ball(spec, L - 2);
    const auto ball = enumerate_ball(spec, L);
    Accumulated acc;
    for (double R : {2.0, 4.0, 8.0}) {
        double rprime = 0.0;
        for (const auto& e : core) {
            if (e.letters.empty()) continue;
            const double min_d = *std::min_element(e.cartan.begin(), e.cartan.end());
            if (min_d <= R) rprime = std::max(rprime, e.cartan[0]);
        }
        rprime += 1e-9;
        long long violations = 0;
        for (const auto& e : ball) {
            if (e.letters.empty()) continue;
            if (e.cartan[0] <= rprime) continue;
            const double min_d = *std::min_element(e.cartan.begin(), e.cartan.end());
            if (min_d <= R) ++violations;
        }
        TrialOutcome out;
        out.value = rprime;
        out.note = "R'(" + std::to_string(R) + ") with " + std::to_string(violations) +
                   " violations at L=" + std::to_string(L);
        out.failed = violations > 0;
        acc.feed(out);
    }
    return acc;
}

Accumulated run_squeeze(const VerifyJob& job) {
    const SqueezeEstimate est =
        squeeze_estimate(job.tolerances.squeeze_epsilon, job.trials, job.seed);
    Accumulated acc;
    TrialOutcome out;
    out.value = est.L;
    out.note = "accepted L (worst midpoint distance " +
               std::to_string(est.worst_midpoint_distance) + ")";
    out.failed = est.cap_reached;
    acc.feed(out);
    return acc;
}

}  // namespace

const char* to_string(LemmaId id) {
    switch (id) {
        case LemmaId::Thin: return "thin";
        case LemmaId::Contracting: return "contracting";
        case LemmaId::ProjectionDefect: return "projection_defect";
        case LemmaId::Squeeze: return "squeeze";
        case LemmaId::AlignDichotomy: return "align_dichotomy";
        case LemmaId::ShadowAlignFwd: return "shadow_align_fwd";
        case LemmaId::ShadowAlignBwd: return "shadow_align_bwd";
        case LemmaId::AxisBounds: return "axis_bounds";
        case LemmaId::AppendixConst: return "appendix_const";
        case LemmaId::Cocycle: return "cocycle";
        case LemmaId::ShadowBuse: return "shadow_buse";
        case LemmaId::SimultaneousShadow: return "simultaneous_shadow";
        case LemmaId::DivFactors: return "div_factors";
    }
    return "unknown";
}

LemmaId lemma_from_string(const std::string& name) {
    for (LemmaId id : {LemmaId::Thin, LemmaId::Contracting, LemmaId::ProjectionDefect,
                       LemmaId::Squeeze, LemmaId::AlignDichotomy, LemmaId::ShadowAlignFwd,
                       LemmaId::ShadowAlignBwd, LemmaId::AxisBounds, LemmaId::AppendixConst,
                       LemmaId::Cocycle, LemmaId::ShadowBuse, LemmaId::SimultaneousShadow,
                       LemmaId::DivFactors}) {
        if (name == to_string(id)) return id;
    }
    raise(ErrorCode::UnknownLemma, "unknown lemma id: " + name);
}

std::string Report::to_json_text() const {
    nlohmann::json root{{"lemma_id", lemma_id},
                        {"trials", trials},
                        {"seed", seed},
                        {"failures", failures},
                        {"worst_case", {{"value", worst_case}, {"note", worst_note}}}};
    return root.dump(2);
}

Report run_verify(const VerifyJob& job) {
    if (job.trials < 1) raise(ErrorCode::InvalidArgument, "verify job needs trials >= 1");
    const auto start = std::chrono::steady_clock::now();

    Accumulated acc;
    switch (job.lemma) {
        case LemmaId::Thin: acc = run_trials(job, trial_thin); break;
        case LemmaId::Contracting: acc = run_trials(job, trial_contracting); break;
        case LemmaId::ProjectionDefect: acc = run_trials(job, trial_projection_defect); break;
        case LemmaId::Squeeze: acc = run_squeeze(job); break;
        case LemmaId::AlignDichotomy: acc = run_trials(job, trial_align_dichotomy); break;
        case LemmaId::ShadowAlignFwd:
            acc = run_trials(job, [](Rng& rng, const VerifyTolerances& tol) {
                return trial_shadow_align(rng, tol, true);
            });
            break;
        case LemmaId::ShadowAlignBwd:
            acc = run_trials(job, [](Rng& rng, const VerifyTolerances& tol) {
                return trial_shadow_align(rng, tol, false);
            });
            break;
        case LemmaId::AxisBounds: acc = run_trials(job, trial_axis_bounds); break;
        case LemmaId::AppendixConst: acc = run_appendix(job); break;
        case LemmaId::Cocycle: acc = run_trials(job, trial_cocycle); break;
        case LemmaId::ShadowBuse: acc = run_trials(job, trial_shadow_buse); break;
        case LemmaId::SimultaneousShadow: acc = run_simultaneous_shadow(job); break;
        case LemmaId::DivFactors: acc = run_div_factors(job); break;
    }

    Report report;
    report.lemma_id = to_string(job.lemma);
    report.trials = job.trials;
    report.seed = job.seed;
    report.failures = acc.failures;
    report.worst_case = std::isfinite(acc.worst) ? acc.worst : 0.0;
    report.worst_note = acc.worst_note;
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

GroupSpec bundled_fixture() {
    const IsometryH2 g1 = axis_translation(3.0);
    const double s = std::sqrt(2.0);
    const IsometryH2 conj(3.0 / s, 1.0 / s, 1.0 / s, 1.0 / s);  // 0 -> 1, inf -> 3
    const IsometryH2 g2 = conj * axis_translation(3.0) * conj.inverse();

    GroupSpec spec;
    spec.r = 2;
    spec.generator_names = {"a", "b"};
    spec.generators.push_back(ProductIsometry(std::vector<IsometryH2>{g1, g1}));
    spec.generators.push_back(ProductIsometry(std::vector<IsometryH2>{g2, g2}));
    // Midpoint of the common perpendicular between the axes (0, inf), (1, 3).
    const H2Point base(1.0, std::sqrt(2.0));
    spec.basepoint.components = {base, base};
    spec.validate();
    return spec;
}

GroupSpec bundled_single_factor() {
    const GroupSpec two = bundled_fixture();
    GroupSpec spec;
    spec.r = 1;
    spec.generator_names = two.generator_names;
    for (const auto& g : two.generators) {
        spec.generators.push_back(ProductIsometry(std::vector<IsometryH2>{g.components[0]}));
    }
    spec.basepoint.components = {two.basepoint.components[0]};
    spec.validate();
    return spec;
}

}  // namespace horo
