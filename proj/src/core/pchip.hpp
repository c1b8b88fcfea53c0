#ifndef DHOA_CORE_PCHIP_HPP
#define DHOA_CORE_PCHIP_HPP

#include <vector>

namespace dhoa {

// Shape-preserving piecewise-cubic Hermite interpolant (Fritsch-Carlson
// slopes). Monotone data stays monotone, so a strictly positive grid yields a
// strictly positive interpolant.
class MonotoneCubic {
public:
    MonotoneCubic() = default;
    MonotoneCubic(std::vector<double> x, std::vector<double> y);

    double operator()(double x) const;

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    std::vector<double> x_;
    std::vector<double> y_;
    std::vector<double> slope_;
};

} // namespace dhoa

#endif
