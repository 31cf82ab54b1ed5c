// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace cylsh {

/// Smooth windows generating the cylindrical shearlet partition.
///
/// - `phi` is a separable C-infinity bump: 1 on [-1/16, 1/16]^3, 0 outside
///   [-1/8, 1/8]^3, monotone in between.
/// - `radial` is W with W^2(xi) = phi^2(xi/4) - phi^2(xi), so that
///   phi^2(xi) + sum_{j>=0} W^2(4^-j xi) = 1.
/// - `angular` is v with supp v = [-1, 1] and v^2(z-1) + v^2(z) + v^2(z+1) = 1
///   for z in [-1, 1].
struct WindowFunctions {
    /// C-infinity step: 0 for t <= 0, 1 for t >= 1, s(t) + s(1-t) = 1.
    static double transition(double t);

    static double bump1d(double x);
    static double phi(double xi1, double xi2, double xi3);
    static double radial_sq(double xi1, double xi2, double xi3);
    static double radial(double xi1, double xi2, double xi3);
    static double angular_sq(double z);
    static double angular(double z);
};

/// The windows carry no state; this returns the canonical set.
WindowFunctions build_windows();

}  // namespace cylsh
