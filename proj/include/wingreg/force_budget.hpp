#pragma once

#include "wingreg/errors.hpp"

namespace wingreg {

// Flight-mass and margin parameters of the lift requirement. The model
// assumes the whole single-wing lift loads the regulator (worst case); see
// README for the conservatism note.
struct ForceBudget {
    double mass_kg;
    double g_mps2;
    double thrust_margin;  // dimensionless, >= 1
    double fos;            // factor of safety, >= 1

    ForceBudget(double mass_kg_, double g_mps2_, double thrust_margin_, double fos_)
        : mass_kg(mass_kg_), g_mps2(g_mps2_), thrust_margin(thrust_margin_), fos(fos_) {
        if (!(mass_kg > 0.0)) throw ValidationError("mass_kg must be > 0");
        if (!(g_mps2 > 0.0)) throw ValidationError("g must be > 0");
        if (!(thrust_margin >= 1.0)) throw ValidationError("thrust_margin must be >= 1");
        if (!(fos >= 1.0)) throw ValidationError("fos must be >= 1");
    }
};

// Moment arms of the lever the second radius link forms about the shoulder.
struct LeverStage {
    double arm_out_mm;  // shoulder -> distal load point
    double arm_in_mm;   // shoulder -> regulator attachment

    LeverStage(double arm_out_mm_, double arm_in_mm_)
        : arm_out_mm(arm_out_mm_), arm_in_mm(arm_in_mm_) {
        if (!(arm_out_mm > 0.0) || !(arm_in_mm > 0.0))
            throw ValidationError("lever arms must be > 0");
    }
};

struct RegulatorRequirement {
    double displacement_mm;
    double actuation_force_gf;

    RegulatorRequirement(double displacement_mm_, double actuation_force_gf_)
        : displacement_mm(displacement_mm_), actuation_force_gf(actuation_force_gf_) {
        if (!(displacement_mm > 0.0)) throw ValidationError("displacement must be > 0");
        if (!(actuation_force_gf > 0.0)) throw ValidationError("actuation force must be > 0");
    }
};

// Peak lift of a single wing: M * g * T_max * 1/2 * FoS.
inline double single_wing_lift_N(const ForceBudget& b) {
    return b.mass_kg * b.g_mps2 * b.thrust_margin * 0.5 * b.fos;
}

struct RegulatorLoad {
    double newtons;
    double grams_force;
};

// Axial load on the regulator through the lever stage. The grams-force
// conversion uses the budget's own g, not a hard-coded standard gravity.
inline RegulatorLoad regulator_load(const ForceBudget& b, const LeverStage& lever) {
    const double newtons = lever.arm_out_mm / lever.arm_in_mm * single_wing_lift_N(b);
    return {newtons, 1000.0 * newtons / b.g_mps2};
}

inline RegulatorRequirement requirement_table(const ForceBudget& b, const LeverStage& lever,
                                              double displacement_mm) {
    return RegulatorRequirement(displacement_mm, regulator_load(b, lever).grams_force);
}

}  // namespace wingreg
