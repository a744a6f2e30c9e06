#include "gfcsim/scanner/ttl_spoof.hpp"

#include <algorithm>

namespace gfcsim::scanner {

SpoofArtifact draw_spoof_artifact(const TtlSpoofModel& model, RngStream& rng) {
    SpoofArtifact a;
    a.live = rng.bernoulli(model.live_probability);
    a.onset = 60 * rng.uniform_int(model.onset_min_minutes, model.onset_max_minutes);
    const bool outlier = rng.bernoulli(model.outlier_probability);
    const auto which = rng.uniform_int(0, std::max<std::int64_t>(1, static_cast<std::int64_t>(model.outlier_deltas.size())) - 1);
    a.ttl_delta = outlier && !model.outlier_deltas.empty()
                      ? model.outlier_deltas[static_cast<std::size_t>(which)]
                      : model.typical_delta;
    return a;
}

const char* to_string(ScanOutcome o) {
    switch (o) {
        case ScanOutcome::speaks_tor: return "speaks-tor";
        case ScanOutcome::no_tor: return "no-tor";
        case ScanOutcome::unreachable: return "unreachable";
    }
    return "?";
}

}  // namespace gfcsim::scanner
