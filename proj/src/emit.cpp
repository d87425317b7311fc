#include "aggrfix/emit.hpp"

#include <json.hpp>

#include <algorithm>
#include <sstream>

namespace aggrfix {

namespace {

// ground-base indices in lexicographic name order
std::vector<int> name_order(const GroundProgram& gp) {
    std::vector<int> order(static_cast<std::size_t>(gp.atoms.size()));
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return gp.atoms.at(a).name < gp.atoms.at(b).name; });
    return order;
}

std::vector<std::string> model_names(const GroundProgram& gp, const AtomSet& m) {
    std::vector<std::string> names;
    m.for_each([&](std::size_t i) { names.push_back(gp.atoms.at(static_cast<int>(i)).name); });
    std::sort(names.begin(), names.end());
    return names;
}

char truth_of(const SemanticsResult& res, std::size_t i) {
    if (res.lower.test(i)) return 'T';
    if (res.upper.test(i)) return 'U';
    return 'F';
}

} // namespace

std::string emit_text(const SemanticsResult& res, const GroundProgram& gp, SemanticsKind kind,
                      std::optional<Family> family) {
    std::ostringstream os;
    os << "semantics: " << semantics_name(kind) << '\n';
    if (family) os << "family: " << family_name(*family) << '\n';
    if (res.is_pair) {
        os << "exact: " << (res.exact ? "true" : "false") << '\n';
        for (char want : {'T', 'U', 'F'}) {
            os << want << ":\n";
            for (int i : name_order(gp))
                if (truth_of(res, static_cast<std::size_t>(i)) == want)
                    os << "  " << gp.atoms.at(i).name << '\n';
        }
    }
    if (res.is_models) {
        os << "models: " << res.models.size() << '\n';
        for (std::size_t k = 0; k < res.models.size(); ++k) {
            os << "model " << (k + 1) << ": {";
            auto names = model_names(gp, res.models[k]);
            for (std::size_t j = 0; j < names.size(); ++j) {
                if (j) os << ", ";
                os << names[j];
            }
            os << "}\n";
        }
    }
    os << "stats: applications=" << res.stats.op_applications
       << " truncation=" << res.stats.truncation << " caps_hit=" << (res.stats.caps_hit ? 1 : 0)
       << '\n';
    return os.str();
}

std::string emit_json(const SemanticsResult& res, const GroundProgram& gp, SemanticsKind kind,
                      std::optional<Family> family) {
    nlohmann::json j;
    j["semantics"] = semantics_name(kind);
    j["family"] = family ? nlohmann::json(family_name(*family)) : nlohmann::json(nullptr);
    j["exact"] = res.is_pair ? nlohmann::json(res.exact) : nlohmann::json(nullptr);
    nlohmann::json atoms = nlohmann::json::object();
    if (res.is_pair)
        for (int i : name_order(gp))
            atoms[gp.atoms.at(i).name] = std::string(1, truth_of(res, static_cast<std::size_t>(i)));
    j["atoms"] = std::move(atoms);
    nlohmann::json models = nlohmann::json::array();
    if (res.is_models)
        for (const AtomSet& m : res.models) models.push_back(model_names(gp, m));
    j["models"] = std::move(models);
    j["stats"] = {{"phi_applications", res.stats.op_applications},
                  {"truncation", res.stats.truncation},
                  {"caps_hit", res.stats.caps_hit}};
    return j.dump(2) + "\n";
}

} // namespace aggrfix
