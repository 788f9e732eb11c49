#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "horo/measures.hpp"

// Seeded randomized certification suites for the quantitative lemmas, one
// verifier per lemma id, shared by the CLI and the acceptance tests.

namespace horo {

enum class LemmaId {
    Thin,
    Contracting,
    ProjectionDefect,
    Squeeze,
    AlignDichotomy,
    ShadowAlignFwd,
    ShadowAlignBwd,
    AxisBounds,
    AppendixConst,
    Cocycle,
    ShadowBuse,
    SimultaneousShadow,
    DivFactors,
};

const char* to_string(LemmaId id);
LemmaId lemma_from_string(const std::string& name);  // raises UnknownLemma

struct VerifyTolerances {
    double cocycle = 1e-9;
    double closed_vs_limit = 1e-6;
    double hausdorff_slack = 1e-6;
    double contracting_slack = 1e-6;
    double defect_bound = 1.3;
    double squeeze_epsilon = 1.0;
    double shadow_buse = 1e-9;
    double appendix = 1e-4;
    double stability_window = 2.0;  // allowed spread of R' across L for group lemmas
};

struct VerifyJob {
    LemmaId lemma = LemmaId::Cocycle;
    long long trials = 1000;
    std::uint64_t seed = 1;
    VerifyTolerances tolerances;
    std::optional<GroupSpec> spec;  // group-based lemmas; bundled fixture when absent
    int workers = 1;
};

struct Report {
    std::string lemma_id;
    long long trials = 0;
    std::uint64_t seed = 0;
    long long failures = 0;
    double worst_case = 0.0;
    std::string worst_note;
    double wall_seconds = 0.0;

    // Stable content (no wall time), byte-identical for identical jobs.
    std::string to_json_text() const;
};

Report run_verify(const VerifyJob& job);

// Bundled diagonal-Schottky fixture: two free loxodromic generators with
// translation length 3 and axes (0, inf) and (1, 3), embedded diagonally in
// r = 2 with the basepoint at the midpoint of the common perpendicular.
GroupSpec bundled_fixture();
GroupSpec bundled_single_factor();

}  // namespace horo
