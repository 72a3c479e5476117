#pragma once

#include <algorithm>

namespace singshock {

/// Length of [0,1] ∩ [a,b] for a < b, i.e. max(0, min(1,b) - max(0,a)).
///
/// With a = r*phi in [-1,1], the three donor weights
/// L(-1+a, a), L(a, 1+a), L(1+a, 2+a) partition one cell of transported mass.
constexpr double overlap_length(double a, double b) noexcept {
    return std::max(0.0, std::min(1.0, b) - std::max(0.0, a));
}

/// The three donor weights of a cell whose content moves by `shift` cells.
struct DonorWeights {
    double to_right;  // share landing in the right neighbour
    double stay;      // share remaining in place
    double to_left;   // share landing in the left neighbour
};

constexpr DonorWeights donor_weights(double shift) noexcept {
    return {overlap_length(-1.0 + shift, shift), overlap_length(shift, 1.0 + shift),
            overlap_length(1.0 + shift, 2.0 + shift)};
}

} // namespace singshock
