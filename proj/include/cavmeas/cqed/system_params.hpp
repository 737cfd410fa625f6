#pragma once

namespace cavmeas::cqed {

// Physical constants of the atom-cavity-probe system, in SI units.
// Frequencies are angular (rad/s). Linewidths are half-widths.
struct SystemParams {
    double g0 = 0.0;               // peak atom-photon coupling at an antinode
    double kappa = 0.0;            // cavity field decay rate
    double gamma = 0.0;            // atomic dipole decay rate
    double eta = 0.0;              // detection quantum efficiency
    double wavelength = 0.0;       // probe wavelength (m)
    double w0_cavity = 0.0;        // cavity mode waist (m)
    double w_probe = 0.0;          // fluorescence probe beam waist (m)
    double delta_ca = 0.0;         // cavity - atom detuning
    double delta_pc = 0.0;         // probe - cavity detuning
    double axial_sigma = 0.0;      // rms axial position spread (m)
    double internal_factor = 1.0;  // multilevel reduction of the emission rate

    // Probe - atom detuning; always derived from the two stored detunings.
    double delta_pa() const { return delta_pc + delta_ca; }

    double wavenumber() const;

    // Throws ConfigError naming the first offending field.
    void validate() const;

    // Fluorescence-method configuration of the experiment: cavity 10 MHz
    // below the atom, probe half a cavity linewidth below the cavity.
    static SystemParams defaults();
};

}  // namespace cavmeas::cqed
