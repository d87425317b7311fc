#ifndef AGGRFIX_TESTS_GEN_HPP
#define AGGRFIX_TESTS_GEN_HPP

#include "aggrfix/oracle.hpp"
#include "aggrfix/parser.hpp"
#include "aggrfix/semantics.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <tuple>
#include <vector>

namespace aggrfix::testgen {

// AGGRFIX_SEED overrides the default seed of the randomized suites.
std::uint64_t seed_from_env(std::uint64_t fallback = 0xA66F1Dull);

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    std::uint64_t raw() { return eng_(); }
    int below(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }
    int range(int lo, int hi) { return lo + below(hi - lo + 1); } // inclusive
    bool chance(int percent) { return below(100) < percent; }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(below(static_cast<int>(v.size())))];
    }

private:
    std::mt19937_64 eng_;
};

// A parsed and grounded program with its structure; the handle the tests
// pass around.
struct Instance {
    std::unique_ptr<Program> prog;
    std::unique_ptr<Structure> d;
    GroundProgram gp;
    EvalCaps caps;
};

Instance load(const std::string& text, const AggregateRegistry* reg = nullptr);

// ---- canonical example programs --------------------------------------------

// one-rule program over {0,1} whose operator is non-monotone
std::string counting_loop_program();
// body is a two-valued tautology over {0,1,2,3}
std::string tautology_body_program();
// two friends accepting a party invitation if the other does
std::string party_invitation_program();
// cardinality-test program separating FLP-stable from the stable families
std::string flp_program();
// the same with the cardinality atom replaced by its propositional spelling
std::string flp_translated_program();
// company control over rational share tables
std::string company_control_program(
    const std::vector<std::tuple<std::string, std::string, std::string>>& shares);

struct GraphEdge {
    std::string from, to;
    long weight;
};
// shortest path, stratified formulation (cp feeds cp)
std::string shortest_path_v1(const std::vector<std::string>& nodes,
                             const std::vector<GraphEdge>& edges, long wlo, long whi);
// shortest path, recursive formulation (sp feeds cp)
std::string shortest_path_v2(const std::vector<std::string>& nodes,
                             const std::vector<GraphEdge>& edges, long wlo, long whi);

// ---- random program generators ----------------------------------------------

// arbitrary bodies, count/sum/prod aggregates with any comparison; at most
// `max_atoms` ground atoms
std::string random_mixed_program(Rng& rng, int max_atoms);
// definite: positive bodies only
std::string random_definite_program(Rng& rng);
// stratified: aggregates and negation only over strictly lower predicates
std::string random_stratified_program(Rng& rng);
// normal shape: bodies are conjunctions of literals and aggregate atoms
std::string random_normal_program(Rng& rng);
// aggregate-free programs (used for the classical-operator cross-checks)
std::string random_plain_program(Rng& rng);

struct RandomGraph {
    std::vector<std::string> nodes;
    std::vector<GraphEdge> edges;
};
RandomGraph random_graph(Rng& rng, int max_nodes, long max_weight);

// random three-valued tuple sets of 1-tuples over small rationals
ThreeValuedSet random_three_valued_set(Rng& rng, int max_width, bool negatives, bool fractions);
AggKind random_agg_kind(Rng& rng, bool bnd_compatible);

} // namespace aggrfix::testgen

#endif
