// SPDX-License-Identifier: Apache-2.0
#include "silent_tracker/codebook.hpp"

#include "silent_tracker/channel.hpp"
#include "silent_tracker/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace silent_tracker {

Codebook make_codebook(double beamwidth_deg) {
    if (!(beamwidth_deg > 0.0) || beamwidth_deg > 360.0)
        throw std::domain_error("make_codebook: beamwidth must be in (0, 360]");

    int n = std::max(1, static_cast<int>(std::lround(360.0 / beamwidth_deg)));
    double spacing = 360.0 / n;

    Codebook book;
    book.beamwidth_deg = spacing;
    book.beams.reserve(n);
    for (int i = 0; i < n; ++i) {
        Beam b;
        b.id = i;
        b.boresight_deg = spacing * i;
        b.theta_3db_deg = spacing;
        b.peak_gain_dbi = 10.0 * std::log10(360.0 / spacing);
        b.omni = (n == 1);
        book.beams.push_back(b);
    }
    return book;
}

Codebook make_omni_codebook() {
    return make_codebook(360.0);
}

std::pair<int, int> adjacent(const Codebook& book, int id) {
    int n = book.size();
    if (id < 0 || id >= n)
        throw std::domain_error("adjacent: beam id out of range");
    return {(id + n - 1) % n, (id + 1) % n};
}

int best_beam_oracle(const Codebook& book, double direction_deg) {
    if (!std::isfinite(direction_deg))
        throw std::domain_error("best_beam_oracle: direction must be finite");
    int best = 0;
    double best_gain = -1e300;
    for (const Beam& b : book.beams) {
        double g = beam_gain_dbi(b, angular_distance_deg(b.boresight_deg, direction_deg));
        if (g > best_gain) { // strict: ties keep the lowest id
            best_gain = g;
            best = b.id;
        }
    }
    return best;
}

} // namespace silent_tracker
