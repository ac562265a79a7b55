// model.hpp — physical scenarios and backend-neutral operator descriptions
//
// Jump operators and Hamiltonians are passed around as small data objects
// (per-site weights, pair couplings), never as materialized 2^n x 2^n
// matrices; each backend realizes them in its own representation.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <variant>
#include <vector>

#include "unravel/errors.hpp"

namespace unravel {

// Collective decay into a squeezed reservoir.  gamma sets the time unit,
// zeta in [0,1] the degree of squeezing (1 = none, 0 = infinite).
struct SqueezedModel {
    double gamma = 1.0;
    double zeta = 1.0;
    int n = 1;

    void validate() const;
};

// Array of emitters coupled to a 1D waveguide; phases[j] = k0 * z_j.
struct WaveguideModel {
    double gamma = 1.0;
    std::vector<double> phases;
    int n = 1;

    void validate() const;
};

// J = sum_j (lower[j] sigma_j^- + raise[j] sigma_j^+)
struct SiteSumOperator {
    Eigen::VectorXcd lower;
    Eigen::VectorXcd raise;

    int sites() const { return static_cast<int>(lower.size()); }
};

// H = sum_{j<l} h(j,l) (sigma_j^+ sigma_l^- + sigma_j^- sigma_l^+)
// with h symmetric and zero on the diagonal.
struct PairCouplingOperator {
    Eigen::MatrixXd h;

    int sites() const { return static_cast<int>(h.rows()); }
    bool is_zero(double tol = 0.0) const { return h.cwiseAbs().maxCoeff() <= tol; }
};

// J = sqrt(gamma) sum_j [(1+zeta) sigma_j^- + (1-zeta) sigma_j^+] / 2
SiteSumOperator build_squeezed_jump(const SqueezedModel& model);

struct WaveguideOperators {
    SiteSumOperator j_right;  // w_j = sqrt(gamma/2) e^{-i k0 z_j} on sigma^-
    SiteSumOperator j_left;   // w_j = sqrt(gamma/2) e^{+i k0 z_j} on sigma^-
    PairCouplingOperator hamiltonian;  // h_jl = (gamma/2) sin(k0 |z_j - z_l|)
};

WaveguideOperators build_waveguide_operators(const WaveguideModel& model);

// Equivalent ways of writing the squeezed jump operator.  Each form maps
// onto (gamma, zeta) such that the jump operator is unchanged:
//   Angle:        J = sqrt(G) (cos(phi) S- + sin(phi) S+),   phi in [0, pi/4]
//   Rapidity:     J = sqrt(G) (cosh(r) S- + sinh(r) S+),     r   in [0, inf)
//   Reflectivity: J = sqrt(G) (S- + E S+),                   E   in [0, 1]
enum class ParamForm { Angle, Rapidity, Reflectivity };

struct GammaZeta {
    double gamma;
    double zeta;
};

GammaZeta convert_parametrization(ParamForm form, double value, double big_gamma);

using AnyModel = std::variant<SqueezedModel, WaveguideModel>;

int n_sites(const AnyModel& model);
const SqueezedModel* as_squeezed(const AnyModel& model);
const WaveguideModel* as_waveguide(const AnyModel& model);

// Jump channels and (possibly absent) Hamiltonian of a model, in the
// fixed channel order every engine follows when consuming noise.
struct RealizedOperators {
    std::vector<SiteSumOperator> jumps;
    std::optional<PairCouplingOperator> hamiltonian;
};

RealizedOperators realize_operators(const AnyModel& model);

}  // namespace unravel
