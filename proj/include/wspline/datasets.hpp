#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wspline/measure.hpp"

namespace wspline {

/// Tight cluster at the origin that fans out radially into three branches
/// with growing spread. Uniform weights, deterministic in the seed.
TimedSequence gen_diverging_gaussian(std::uint64_t seed, std::size_t n = 200,
                                     std::size_t steps = 4, std::size_t dim = 2);

/// Gaussian mixture whose component count branches and then merges along the
/// first axis; cloud k has counts[k] atoms with uniform weights.
TimedSequence gen_converging_gaussian(std::uint64_t seed,
                                      std::vector<std::size_t> counts = {32, 96, 64, 32},
                                      std::size_t dim = 2);

/// CSV schema, one sequence per file:
///   header  step,time,mass,x0,x1,...,x{d-1}
///   rows sorted by step; all rows of one step share its time; '.' decimals.
TimedSequence load_sequence_csv(const std::string& path);
void save_sequence_csv(const TimedSequence& seq, const std::string& path);

} // namespace wspline
