#include "helmspec/domain.hpp"

#include <cmath>
#include <string>

#include "helmspec/errors.hpp"

namespace helmspec {

Domain Domain::interval(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorCode::InvalidArgument, "interval length must be positive");
    return Domain(a, 0.0, false);
}

Domain Domain::rectangle(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        fail(ErrorCode::InvalidArgument, "rectangle sides must be positive");
    return Domain(a, b, true);
}

bool Domain::contains(Point p) const {
    const double slack = 1e-14;
    if (!(std::abs(p.x) <= 0.5 * a_ * (1.0 + slack))) return false;
    if (rect_ && !(std::abs(p.y) <= 0.5 * b_ * (1.0 + slack))) return false;
    return true;
}

void Domain::require_contains(Point p) const {
    if (!contains(p))
        fail(ErrorCode::OutOfDomain, "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") outside domain");
}

}  // namespace helmspec
