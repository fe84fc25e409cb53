#ifndef GRAPEVINE_GUESSING_HPP
#define GRAPEVINE_GUESSING_HPP

#include <array>
#include <optional>
#include <string_view>

#include "grapevine/linalg.hpp"

namespace grapevine {

struct ModelSpec;

enum class Heuristic {
  Static,           // always the model default guess
  Previous,         // previous converged root
  ImplicitDirect,   // first-order implicit-function extrapolation, dense solve
  ImplicitMatFree,  // same extrapolation through conjugate gradients
};

inline constexpr std::array<Heuristic, 4> kAllHeuristics = {
    Heuristic::Static, Heuristic::Previous, Heuristic::ImplicitDirect,
    Heuristic::ImplicitMatFree};

const char* heuristic_name(Heuristic h);
std::optional<Heuristic> parse_heuristic(std::string_view name);

// State threaded through a trajectory: the latest converged root and the
// parameter value it was solved at.
struct GuessInfo {
  Vec x_prev;
  Vec theta_prev;
  bool valid = false;
};

struct GuessOutcome {
  Vec guess;
  bool fell_back = false;
};

Vec guess_static(const Vec& default_guess, const GuessInfo& info);
Vec guess_previous(const Vec& default_guess, const GuessInfo& info);

// Solves J_x dx = -J_theta (theta_next - theta_prev) at the previous point
// and proposes x_prev + dx. The J_theta product is formed by one directional
// derivative; J_theta itself is never materialised. Singular systems and CG
// non-convergence fall back to the previous-root guess.
GuessOutcome guess_implicit(const Vec& default_guess, const GuessInfo& info, const Vec& theta_next,
                            const ModelSpec& model, bool matrix_free, double cg_tol,
                            int cg_maxiter);

// Dispatch on the heuristic with the library CG defaults
// (cg_tol 1e-8, cg_maxiter 2n).
GuessOutcome make_guess(Heuristic h, const Vec& default_guess, const GuessInfo& info,
                        const Vec& theta_next, const ModelSpec& model);

}  // namespace grapevine

#endif
