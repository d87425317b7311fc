#ifndef AGGRFIX_SEMANTICS_HPP
#define AGGRFIX_SEMANTICS_HPP

#include "aggrfix/aft.hpp"
#include "aggrfix/analysis.hpp"
#include "aggrfix/kernels.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace aggrfix {

enum class SemanticsKind {
    Supported,
    Least,
    Standard,
    KK,
    WF,
    Stable,
    UltimateKK,
    UltimateWF,
    UltimateStable,
    Flp
};

const char* semantics_name(SemanticsKind k);
std::optional<SemanticsKind> semantics_from_name(const std::string& name);
// kk / wf / stable are parameterized by the aggregate family
bool semantics_uses_family(SemanticsKind k);
bool semantics_is_model_set(SemanticsKind k);

struct SemanticsRequest {
    SemanticsKind kind = SemanticsKind::WF;
    Family family = Family::Ult;
    EvalCaps caps;
    ExecMode mode = ExecMode::Parallel;
};

struct RunStats {
    std::uint64_t op_applications = 0;
    std::uint64_t truncation = 0;
    bool caps_hit = false;
};

struct SemanticsResult {
    bool is_pair = false;
    AtomSet lower, upper;
    bool exact = false;

    bool is_models = false;
    std::vector<AtomSet> models; // ascending in the canonical set order

    RunStats stats;
};

// ---------------------------------------------------------------------------
// Program-level operators.
// ---------------------------------------------------------------------------
AtomSet tp(const GroundProgram& gp, const Structure& d, const AtomSet& i, const EvalCaps& caps,
           ExecMode mode = ExecMode::Serial);
aft::Pair<AtomSet> phi(const GroundProgram& gp, const Structure& d, Family fam,
                       const aft::Pair<AtomSet>& p, const EvalCaps& caps,
                       ExecMode mode = ExecMode::Serial);
aft::Pair<AtomSet> ultimate_op(const GroundProgram& gp, const Structure& d,
                               const aft::Pair<AtomSet>& p, const EvalCaps& caps,
                               ExecMode mode = ExecMode::Serial, TpMemo* memo = nullptr);

// All fixpoints of tp (supported models) / all pre-fixpoints (models), by
// enumeration over at most caps.max_atoms ground atoms.
std::vector<AtomSet> supported_models(const GroundProgram& gp, const Structure& d,
                                      const EvalCaps& caps, ExecMode mode = ExecMode::Serial);
std::vector<AtomSet> models(const GroundProgram& gp, const Structure& d, const EvalCaps& caps,
                            ExecMode mode = ExecMode::Serial);

AtomSet least_model_definite(const GroundProgram& gp, const Structure& d, const EvalCaps& caps,
                             ExecMode mode = ExecMode::Serial);
AtomSet standard_model_stratified(const GroundProgram& gp, const Structure& d,
                                  const EvalCaps& caps, ExecMode mode = ExecMode::Serial);

// The three-valued consequence operator as an approximator of tp, and the
// ultimate approximator of tp (memoized across one run).
aft::Approximator<aft::PowersetSpace> phi_approximator(const GroundProgram& gp, const Structure& d,
                                                       Family fam, const EvalCaps& caps,
                                                       ExecMode mode);
aft::Approximator<aft::PowersetSpace> ultimate_approximator(const GroundProgram& gp,
                                                            const Structure& d,
                                                            const EvalCaps& caps, ExecMode mode,
                                                            std::shared_ptr<TpMemo> memo);

// FLP reduct of a ground normal program: rules with a body conjunct false
// in I are deleted. Bodies must be conjunctions of literals and aggregate
// atoms.
GroundProgram flp_reduct(const GroundProgram& gp, const Structure& d, const AtomSet& i,
                         const EvalCaps& caps);
// I is FLP-stable iff it is a subset-minimal model of its reduct.
bool flp_stable_check(const GroundProgram& gp, const Structure& d, const AtomSet& i,
                      const EvalCaps& caps);

SemanticsResult run_semantics(const GroundProgram& gp, const Structure& d,
                              const SemanticsRequest& req);

} // namespace aggrfix

#endif
