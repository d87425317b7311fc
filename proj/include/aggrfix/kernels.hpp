#ifndef AGGRFIX_KERNELS_HPP
#define AGGRFIX_KERNELS_HPP

#include "aggrfix/eval.hpp"
#include "aggrfix/ground.hpp"

#include <cstdint>
#include <functional>
#include <unordered_map>
#include <utility>
#include <vector>

// Data-parallel inner kernels of the engine, each in two builds: a plain
// serial loop kept as the reference implementation, and an OpenMP variant
// used by default. Both are deterministic: parallel merges are unions,
// pointwise maxima or index-ordered folds, so results are
// schedule-independent. The test suite checks Serial == Parallel on random
// inputs and `aggrfix bench` times them against each other.

namespace aggrfix {

enum class ExecMode { Serial, Parallel };

// One application of the two-valued immediate consequence operator: the
// head atoms of rules whose body holds in I. Parallel over rules.
AtomSet tp_step(const GroundProgram& gp, const Structure& d, const AtomSet& i,
                const EvalCaps& caps, ExecMode mode);

// One application of the three-valued immediate consequence operator: each
// atom takes the truth-order join of its rule bodies under the family's
// aggregates. Parallel over rules.
std::pair<AtomSet, AtomSet> phi_step(const GroundProgram& gp, const Structure& d, Family fam,
                                     const AtomSet& lower, const AtomSet& upper,
                                     const EvalCaps& caps, ExecMode mode);

// Intersection and union of tp over every interpretation in [lower, upper]:
// one application of the ultimate operator. Interval members are evaluated
// in parallel; `memo` caches tp results across applications.
using TpMemo = std::unordered_map<AtomSet, AtomSet, AtomSetHash>;

std::pair<AtomSet, AtomSet> tp_interval_fold(const GroundProgram& gp, const Structure& d,
                                             const AtomSet& lower, const AtomSet& upper,
                                             const EvalCaps& caps, ExecMode mode,
                                             TpMemo* memo = nullptr);

// Masks in [0, count) satisfying pred, ascending. Parallel over candidates.
std::vector<std::uint64_t> filter_masks(std::uint64_t count,
                                        const std::function<bool(std::uint64_t)>& pred,
                                        ExecMode mode);

} // namespace aggrfix

#endif
