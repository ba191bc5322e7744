#pragma once

#include <random>
#include <span>
#include <vector>

#include "compdist/distributions.hpp"
#include "compdist/mixture.hpp"
#include "compdist/model.hpp"
#include "compdist/rng.hpp"
#include "compdist/truncation.hpp"

namespace compdist {

/// One draw of y = ln x. LNSNP draws use rejection and may throw
/// RejectionBudget; infeasible LNSNP coefficient vectors are rejected with
/// std::invalid_argument.
double draw_y(const BaseDistribution& d, std::mt19937_64& rng);

/// One draw of y restricted to [window.y_min(), window.y_max()]: rejection
/// when the window holds at least a quarter of the mass, inverse cdf
/// otherwise.
double draw_truncated_y(const BaseDistribution& d, const TruncationWindow& window,
                        std::mt19937_64& rng);

std::vector<double> sample(const BaseDistribution& d, std::size_t n, const RngStream& stream);
std::vector<double> sample(const Mixture& mixture, std::size_t n, const RngStream& stream);
/// tt models are sampled component-wise truncated.
std::vector<double> sample(const Model& model, std::size_t n, const RngStream& stream);
std::vector<double> sample(const ModelSpec& spec, std::span<const double> params, std::size_t n,
                           const RngStream& stream);

std::vector<double> sample_truncated(const Mixture& mixture, const TruncationWindow& window,
                                     std::size_t n, const RngStream& stream);
std::vector<double> sample_truncated(const ModelSpec& spec, std::span<const double> params,
                                     const TruncationWindow& window, std::size_t n,
                                     const RngStream& stream);

/// Same as the sample() overloads but returning y = ln x directly.
std::vector<double> sample_y(const Mixture& mixture, std::size_t n, const RngStream& stream);
std::vector<double> sample_truncated_y(const Mixture& mixture, const TruncationWindow& window,
                                       std::size_t n, const RngStream& stream);

}  // namespace compdist
