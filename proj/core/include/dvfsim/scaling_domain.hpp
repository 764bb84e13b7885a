#ifndef DVFSIM_SCALING_DOMAIN_HPP
#define DVFSIM_SCALING_DOMAIN_HPP

#include <dvfsim/error.hpp>

namespace dvfsim {

/// One GPU voltage/frequency operating point. All values are normalized to
/// the factory default setting, which is (1, 1, 1).
struct DvfsSetting {
    double voltage;   ///< core voltage
    double core_freq; ///< core frequency
    double mem_freq;  ///< memory frequency
};

inline constexpr DvfsSetting kDefaultSetting{1.0, 1.0, 1.0};

/// Maximum stable core frequency as a function of core voltage, as a
/// sqrt-affine family: cap(v) = sqrt((v - v_origin) / curvature) + f_origin.
/// The default parameters are the fit measured on a Pascal board. Other
/// fitted curves plug in by changing the three parameters.
struct FreqCapCurve {
    double v_origin = 0.5;
    double curvature = 2.0;
    double f_origin = 0.5;

    double operator()(double voltage) const;
    /// Exact analytic inverse: the voltage whose cap equals `core_freq`.
    double voltage_for(double core_freq) const;
};

/// The scalable voltage/frequency box: core voltage in [min_voltage,
/// max_voltage], memory frequency in [min_mem_freq, max_mem_freq], and core
/// frequency in [min_core_freq, cap(voltage)].
class ScalingDomain {
  public:
    ScalingDomain(double min_voltage, double max_voltage, double min_core_freq,
                  double min_mem_freq, double max_mem_freq,
                  FreqCapCurve curve = FreqCapCurve{});

    /// A wide analytical interval for studying the scaling potential:
    /// voltage and memory frequency in [0.5, 1.2], core frequency from 0.5 up
    /// to the cap (~1.0916 at max voltage).
    static ScalingDomain wide();

    /// The interval measured on real hardware: voltage in [0.8, 1.24], core
    /// frequency from 0.89 up to the cap, memory frequency in [0.8, 1.1].
    static ScalingDomain narrow();

    /// The frequency cap at `voltage`. Throws DomainError outside
    /// [min_voltage, max_voltage].
    double max_core_freq(double voltage) const;

    /// The lowest voltage whose cap reaches `core_freq`. Throws DomainError
    /// when no voltage in the domain does.
    double min_voltage_for(double core_freq) const;

    /// The cap at max voltage, i.e. the highest reachable core frequency.
    double max_core_freq() const { return cap_at_max_voltage_; }

    /// The fastest legal setting (max voltage, its cap, max memory frequency).
    DvfsSetting max_setting() const {
        return {max_voltage_, cap_at_max_voltage_, max_mem_freq_};
    }

    bool contains(const DvfsSetting& s, double tol = 1e-9) const;

    /// Snaps a setting onto a discrete grid of the given step for hardware
    /// with stepped levels: frequencies round down (never past a deadline),
    /// the voltage rounds up to keep the core frequency stable, and
    /// everything clamps back into the domain. The continuous model is the
    /// default; this is the opt-in hook.
    DvfsSetting quantize(const DvfsSetting& s, double step) const;

    double min_voltage() const { return min_voltage_; }
    double max_voltage() const { return max_voltage_; }
    double min_core_freq() const { return min_core_freq_; }
    double min_mem_freq() const { return min_mem_freq_; }
    double max_mem_freq() const { return max_mem_freq_; }
    const FreqCapCurve& curve() const { return curve_; }

  private:
    double min_voltage_;
    double max_voltage_;
    double min_core_freq_;
    double min_mem_freq_;
    double max_mem_freq_;
    FreqCapCurve curve_;
    double cap_at_max_voltage_;
};

} // namespace dvfsim

#endif
