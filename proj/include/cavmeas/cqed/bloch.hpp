#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cavmeas/cqed/system_params.hpp"

namespace cavmeas::cqed {

// Steady state of a driven two-level atom. `coherence` is <sigma_minus>
// in the frame rotating at the probe frequency; the total scattering
// rate is 2 gamma * excited_population.
struct BlochSteadyState {
    double excited_population = 0.0;
    std::complex<double> coherence;
};

BlochSteadyState bloch_steady_state(double rabi, double detuning, double gamma);

// One pole of the incoherent two-time correlation
// <dsigma+(0) dsigma-(t)> = sum_k residue_k exp(pole_k t).
struct SpectralComponent {
    std::complex<double> pole;
    std::complex<double> residue;
};

// Resonance fluorescence spectrum of a two-level atom built with the
// quantum regression theorem from the optical Bloch generator.
//
// Frequencies `nu` are measured from the probe frequency. Densities are
// in photons/s per rad/s, so integrating over nu gives a rate. The
// elastic part is a delta function at nu = 0 carrying elastic_weight().
//
// When the generator is close to defective the eigenvector basis is
// ill-conditioned; degenerate() is then true and every quantity is
// evaluated from the resolvent (the Laplace transform of the correlation)
// rather than from the pole expansion.
class EmissionSpectrum {
public:
    EmissionSpectrum(double rabi, double detuning, double gamma);

    double elastic_weight() const { return elastic_weight_; }
    double inelastic_weight() const { return inelastic_weight_; }
    double total_weight() const { return elastic_weight_ + inelastic_weight_; }

    bool degenerate() const { return degenerate_; }
    const std::vector<SpectralComponent>& components() const { return components_; }
    const BlochSteadyState& steady_state() const { return steady_; }

    std::complex<double> correlation(double t) const;
    double inelastic_density(double nu) const;

    // Integral of the inelastic density against the peak-normalised
    // Lorentzian halfwidth^2 / ((nu - center)^2 + halfwidth^2).
    double filtered_inelastic(double center, double halfwidth) const;

    // Elastic weight times the same Lorentzian evaluated at nu = 0.
    double filtered_elastic(double center, double halfwidth) const;

private:
    // -e0^T (M + s I)^-1 dg0
    std::complex<double> resolvent(std::complex<double> s) const;

    double gamma_;
    BlochSteadyState steady_;
    Eigen::Matrix3cd generator_;
    Eigen::Vector3cd initial_;
    std::vector<SpectralComponent> components_;
    double elastic_weight_ = 0.0;
    double inelastic_weight_ = 0.0;
    bool degenerate_ = false;
};

inline EmissionSpectrum emission_spectrum(double rabi, double detuning, double gamma) {
    return EmissionSpectrum(rabi, detuning, gamma);
}

// Detected photon rate of cavity-collected fluorescence versus probe Rabi
// frequency. The unnormalised response is the spectrum filtered by the
// cavity Lorentzian (half-width kappa, centred at -delta_pc from the
// probe); it is scaled so that its maximum over Rabi frequency equals
// expected_max_rate(params).
class CavityFilteredRate {
public:
    explicit CavityFilteredRate(const SystemParams& params);

    double operator()(double rabi) const { return calibration_ * response(rabi); }
    double response(double rabi) const;

    double optimal_rabi() const { return optimal_rabi_; }
    double max_rate() const { return calibration_ * max_response_; }
    double calibration() const { return calibration_; }

private:
    SystemParams params_;
    double optimal_rabi_ = 0.0;
    double max_response_ = 0.0;
    double calibration_ = 0.0;
};

double cavity_filtered_rate(double rabi, const SystemParams& params);

}  // namespace cavmeas::cqed
