// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <vector>

namespace silent_tracker {

/// A selectable directional receive/transmit pattern. Boresight is relative
/// to the owning node's heading. The omni beam is the degenerate single-entry
/// codebook with 0 dBi gain in every direction.
struct Beam {
    int id = 0;
    double boresight_deg = 0.0;
    double theta_3db_deg = 360.0; // half-power beamwidth
    double peak_gain_dbi = 0.0;
    bool omni = false;
};

/// Uniform azimuth codebook: N beams spaced 360/N apart, ids in boresight
/// order starting at 0 degrees.
struct Codebook {
    std::vector<Beam> beams;
    double beamwidth_deg = 360.0; // effective width, 360/N

    int size() const { return static_cast<int>(beams.size()); }
    bool is_omni() const { return beams.size() == 1 && beams[0].omni; }
};

/// Builds the uniform codebook for the requested beamwidth. The beam count is
/// N = max(1, round(360/beamwidth)) and each beam's half-power width is the
/// actual spacing 360/N, so the half-power sectors tile the circle.
Codebook make_codebook(double beamwidth_deg);

/// The single-beam isotropic codebook.
Codebook make_omni_codebook();

/// Indices of the two directionally adjacent beams, (id-1, id+1) mod N.
/// For the omni book both are the beam itself.
std::pair<int, int> adjacent(const Codebook& book, int id);

/// Ground-truth best beam for a direction given in the codebook frame
/// (degrees relative to the owner heading). Ties broken toward the lowest id.
int best_beam_oracle(const Codebook& book, double direction_deg);

} // namespace silent_tracker
