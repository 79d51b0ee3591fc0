// strategy.hpp
// The strategy data model (joint state + per-party measurement settings),
// ideal-strategy assembly, adversarial embeddings, noise mixing, and the
// JSON file format.

#pragma once

#include "selftest/linalg.hpp"
#include "selftest/observables.hpp"
#include "selftest/states.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace selftest {

enum class Family { GHZ, Schmidt, W, Dicke, Graph };

std::string family_name(Family f);
Family family_from_name(const std::string& name);

struct GhzParams {
  int n;
  double theta;
};
struct SchmidtParams {
  SchmidtCoefficients c;
  int n;
};
struct WParams {
  int n;
};
struct DickeParams {
  int n;
  int k;
};
struct GraphParams {
  Graph g;
};
using FamilyParams = std::variant<GhzParams, SchmidtParams, WParams, DickeParams, GraphParams>;

Family family_of(const FamilyParams& p);
std::string params_label(const FamilyParams& p);

// Joint state plus per-party measurements; immutable after construction.
// noise_epsilon > 0 switches correlation evaluation to the white-noise
// mixture (1-eps)|psi><psi| + eps I/D.
struct Strategy {
  Dims dims;
  StateVector state;
  std::vector<PartyMeasurements> parties;
  double noise_epsilon = 0.0;
  std::optional<FamilyParams> family;  // provenance header carried by files

  int n_parties() const { return static_cast<int>(dims.size()); }
  void validate(double tol = kUnitaryTol) const;
};

// Assembles the family's reference state and ideal measurements; asserts the
// family's condition set passes at 1e-9 before returning.
Strategy ideal_strategy(const FamilyParams& params);

// Per-party junk factors and local unitaries; generates members of the
// equivalence class a self-test identifies. Deterministic given the seed.
struct AdversarialTransform {
  std::vector<int> junk_dims;           // one per party, each >= 1
  std::uint64_t seed = 0;               // seeds the local unitaries
  std::optional<Vector> junk_state;     // over the junk factors; default |0...0>
};

inline constexpr long kEmbedDimGuard = 4096;

// Tensors junk factors onto each party, extends operators as M ⊗ I, then
// conjugates by seeded local unitaries. Correlations are preserved exactly.
Strategy adversarial_embed(const Strategy& s, const AdversarialTransform& t);

Strategy noise_mix(const Strategy& s, double epsilon);

nlohmann::json strategy_to_json(const Strategy& s);
Strategy strategy_from_json(const nlohmann::json& j);
std::string serialize(const Strategy& s);
Strategy deserialize(const std::string& bytes);

nlohmann::json family_params_to_json(const FamilyParams& p);
FamilyParams family_params_from_json(const nlohmann::json& j);

namespace detail {
// Deterministic Haar-like unitary (Ginibre + Gram-Schmidt with explicit
// Box-Muller so the output is platform independent).
Matrix seeded_unitary(int dim, std::uint64_t seed);
}  // namespace detail

}  // namespace selftest
