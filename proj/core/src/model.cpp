#include "unravel/model.hpp"

#include <cmath>

namespace unravel {

void SqueezedModel::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError("SqueezedModel: gamma must be positive and finite");
    if (!(zeta >= 0.0 && zeta <= 1.0))
        throw DomainError("SqueezedModel: zeta must lie in [0, 1]");
    if (n < 1) throw DomainError("SqueezedModel: n must be >= 1");
}

void WaveguideModel::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw DomainError("WaveguideModel: gamma must be positive and finite");
    if (n < 1) throw DomainError("WaveguideModel: n must be >= 1");
    if (static_cast<int>(phases.size()) != n)
        throw DomainError("WaveguideModel: phases must have length n");
    for (double p : phases)
        if (!std::isfinite(p)) throw DomainError("WaveguideModel: phases must be finite");
}

SiteSumOperator build_squeezed_jump(const SqueezedModel& model) {
    model.validate();
    const double wm = std::sqrt(model.gamma) * (1.0 + model.zeta) / 2.0;
    const double wp = std::sqrt(model.gamma) * (1.0 - model.zeta) / 2.0;
    SiteSumOperator op;
    op.lower = Eigen::VectorXcd::Constant(model.n, wm);
    op.raise = Eigen::VectorXcd::Constant(model.n, wp);
    return op;
}

WaveguideOperators build_waveguide_operators(const WaveguideModel& model) {
    model.validate();
    using namespace std::complex_literals;
    const int n = model.n;
    const double amp = std::sqrt(model.gamma / 2.0);

    WaveguideOperators ops;
    ops.j_right.lower.resize(n);
    ops.j_right.raise = Eigen::VectorXcd::Zero(n);
    ops.j_left.lower.resize(n);
    ops.j_left.raise = Eigen::VectorXcd::Zero(n);
    for (int j = 0; j < n; ++j) {
        ops.j_right.lower(j) = amp * std::exp(-1i * model.phases[j]);
        ops.j_left.lower(j) = amp * std::exp(+1i * model.phases[j]);
    }

    ops.hamiltonian.h = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < n; ++j)
        for (int l = j + 1; l < n; ++l) {
            const double h = model.gamma / 2.0 * std::sin(std::abs(model.phases[j] - model.phases[l]));
            ops.hamiltonian.h(j, l) = h;
            ops.hamiltonian.h(l, j) = h;
        }
    return ops;
}

int n_sites(const AnyModel& model) {
    return std::visit([](const auto& m) { return m.n; }, model);
}

const SqueezedModel* as_squeezed(const AnyModel& model) {
    return std::get_if<SqueezedModel>(&model);
}

const WaveguideModel* as_waveguide(const AnyModel& model) {
    return std::get_if<WaveguideModel>(&model);
}

RealizedOperators realize_operators(const AnyModel& model) {
    RealizedOperators ops;
    if (const auto* s = as_squeezed(model)) {
        ops.jumps.push_back(build_squeezed_jump(*s));
    } else {
        const auto* w = as_waveguide(model);
        auto wg = build_waveguide_operators(*w);
        ops.jumps.push_back(std::move(wg.j_right));
        ops.jumps.push_back(std::move(wg.j_left));
        ops.hamiltonian = std::move(wg.hamiltonian);
    }
    return ops;
}

GammaZeta convert_parametrization(ParamForm form, double value, double big_gamma) {
    if (!(big_gamma > 0.0)) throw DomainError("convert_parametrization: Gamma must be positive");
    switch (form) {
        case ParamForm::Angle: {
            const double pi4 = std::atan(1.0);
            if (!(value >= 0.0 && value <= pi4))
                throw DomainError("convert_parametrization: phi must lie in [0, pi/4]");
            const double c = std::cos(value), s = std::sin(value);
            return {(1.0 + 2.0 * c * s) * big_gamma, (c - s) / (c + s)};
        }
        case ParamForm::Rapidity: {
            if (!(value >= 0.0) || !std::isfinite(value))
                throw DomainError("convert_parametrization: r must lie in [0, inf)");
            return {big_gamma * std::exp(2.0 * value), std::exp(-2.0 * value)};
        }
        case ParamForm::Reflectivity: {
            if (!(value >= 0.0 && value <= 1.0))
                throw DomainError("convert_parametrization: E must lie in [0, 1]");
            const double p = 1.0 + value;
            return {big_gamma * p * p, (1.0 - value) / p};
        }
    }
    throw DomainError("convert_parametrization: unknown form");
}

}  // namespace unravel
