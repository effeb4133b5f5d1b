#pragma once

#include <vector>

#include "tangentbody/errors.hpp"
#include "tangentbody/types.hpp"

namespace tangentbody {

/// One mass point of a discrete body, with its offset r_alpha in the tangent
/// space at the body's center of mass.
struct MassPoint {
    double mass = 0.0;
    Vector offset;
};

struct BodyModel {
    std::vector<MassPoint> points;
    double total_mass = 0.0;
    Matrix inertia;  ///< I^ab = sum_alpha m_alpha r^a r^b
};

struct IsotropyResult {
    bool isotropic = false;
    double scalar_inertia = 0.0;  ///< trace(I^ab) / n
};

/// Build the body model. The center-of-mass constraint sum m_alpha r_alpha = 0
/// is checked against `center_tol` relative to sum m_alpha |r_alpha|;
/// violations raise CenterOffsetError carrying the offending offset vector.
BodyModel build_body(const std::vector<MassPoint>& points, double center_tol = 1e-10);

/// True iff max |I^ab - I delta^ab| <= tol with I = trace(I^ab)/n.
IsotropyResult is_isotropic(const BodyModel& body, double tol = 1e-12);

}  // namespace tangentbody
