#include <dvfsim/scaling_domain.hpp>

#include <cmath>
#include <sstream>

namespace dvfsim {

double FreqCapCurve::operator()(double voltage) const {
    return std::sqrt((voltage - v_origin) / curvature) + f_origin;
}

double FreqCapCurve::voltage_for(double core_freq) const {
    const double d = core_freq - f_origin;
    return curvature * d * d + v_origin;
}

namespace {

[[noreturn]] void out_of_domain(const char* what, double value, double lo, double hi) {
    std::ostringstream msg;
    msg << what << " " << value << " outside [" << lo << ", " << hi << "]";
    throw DomainError(msg.str());
}

} // namespace

ScalingDomain::ScalingDomain(double min_voltage, double max_voltage,
                             double min_core_freq, double min_mem_freq,
                             double max_mem_freq, FreqCapCurve curve)
    : min_voltage_(min_voltage), max_voltage_(max_voltage),
      min_core_freq_(min_core_freq), min_mem_freq_(min_mem_freq),
      max_mem_freq_(max_mem_freq), curve_(curve) {
    if (!(min_voltage_ > 0.0) || !(min_voltage_ <= max_voltage_))
        throw ValidationError("voltage", "need 0 < min_voltage <= max_voltage");
    if (!(min_mem_freq_ > 0.0) || !(min_mem_freq_ <= max_mem_freq_))
        throw ValidationError("mem_freq", "need 0 < min_mem_freq <= max_mem_freq");
    if (!(curve_.curvature > 0.0))
        throw ValidationError("curve", "cap curve must be strictly increasing");
    if (min_voltage_ < curve_.v_origin)
        throw ValidationError("voltage", "min_voltage below the cap curve's origin");
    // If the requested floor frequency is unreachable at the lowest voltages,
    // raise the voltage floor to the first voltage that supports it. Voltages
    // below that point admit no legal core frequency at all.
    if (min_core_freq_ > curve_(min_voltage_)) {
        const double lifted = curve_.voltage_for(min_core_freq_);
        if (lifted > max_voltage_)
            throw ValidationError("core_freq",
                                  "min_core_freq above the cap at max_voltage");
        min_voltage_ = lifted;
    }
    if (!(min_core_freq_ > 0.0))
        throw ValidationError("core_freq", "need min_core_freq > 0");
    cap_at_max_voltage_ = curve_(max_voltage_);
}

ScalingDomain ScalingDomain::wide() {
    return ScalingDomain(0.5, 1.2, 0.5, 0.5, 1.2);
}

ScalingDomain ScalingDomain::narrow() {
    return ScalingDomain(0.8, 1.24, 0.89, 0.8, 1.1);
}

double ScalingDomain::max_core_freq(double voltage) const {
    if (!(voltage >= min_voltage_ - 1e-12) || !(voltage <= max_voltage_ + 1e-12))
        out_of_domain("core voltage", voltage, min_voltage_, max_voltage_);
    return curve_(voltage);
}

double ScalingDomain::min_voltage_for(double core_freq) const {
    const double lo = curve_(min_voltage_);
    const double hi = cap_at_max_voltage_;
    if (!(core_freq >= lo - 1e-12) || !(core_freq <= hi + 1e-12))
        out_of_domain("core frequency", core_freq, lo, hi);
    const double v = curve_.voltage_for(core_freq);
    return std::min(std::max(v, min_voltage_), max_voltage_);
}

DvfsSetting ScalingDomain::quantize(const DvfsSetting& s, double step) const {
    if (!(step > 0.0)) throw ValidationError("step", "must be > 0");
    auto down = [step](double x) { return std::floor(x / step + 1e-9) * step; };
    auto up = [step](double x) { return std::ceil(x / step - 1e-9) * step; };
    DvfsSetting out;
    out.mem_freq = std::min(std::max(down(s.mem_freq), up(min_mem_freq_)),
                            down(max_mem_freq_));
    out.core_freq = std::max(down(s.core_freq), up(min_core_freq_));
    out.voltage = std::min(std::max(up(s.voltage), up(min_voltage_)),
                           down(max_voltage_));
    while (out.core_freq > curve_(out.voltage) + 1e-12) {
        if (out.voltage + step <= max_voltage_ + 1e-12)
            out.voltage += step;
        else
            out.core_freq -= step;
    }
    return out;
}

bool ScalingDomain::contains(const DvfsSetting& s, double tol) const {
    if (s.voltage < min_voltage_ - tol || s.voltage > max_voltage_ + tol)
        return false;
    if (s.mem_freq < min_mem_freq_ - tol || s.mem_freq > max_mem_freq_ + tol)
        return false;
    if (s.core_freq < min_core_freq_ - tol) return false;
    return s.core_freq <= curve_(s.voltage) + tol;
}

} // namespace dvfsim
