#pragma once

#include <stdexcept>
#include <string>

namespace wingreg {

// Base class for all domain errors. `id()` is a stable, scripting-friendly
// identifier; the CLI prints it verbatim and maps any Error to exit code 1.
class Error : public std::runtime_error {
public:
    Error(std::string id, const std::string& message)
        : std::runtime_error(id + ": " + message), id_(std::move(id)) {}

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error("ValidationError", msg) {}
};

// Solver failed to reach the requested tolerance. Carries the crank angle at
// which a trajectory sweep broke off, if any.
class NonConvergence : public Error {
public:
    explicit NonConvergence(const std::string& msg, double crank_angle_rad = 0.0)
        : Error("NonConvergence", msg), crank_angle_rad_(crank_angle_rad) {}

    double crank_angle_rad() const noexcept { return crank_angle_rad_; }

private:
    double crank_angle_rad_;
};

// Rank-deficient constraint system: the mechanism is at (or pushed past) a
// toggle / locked configuration.
class SingularJacobian : public Error {
public:
    explicit SingularJacobian(const std::string& msg) : Error("SingularJacobian", msg) {}
};

class TriangleDegenerate : public Error {
public:
    explicit TriangleDegenerate(const std::string& msg) : Error("TriangleDegenerate", msg) {}
};

class Infeasible : public Error {
public:
    explicit Infeasible(const std::string& msg) : Error("Infeasible", msg) {}
};

class DegeneratePath : public Error {
public:
    explicit DegeneratePath(const std::string& msg) : Error("DegeneratePath", msg) {}
};

class TargetUnreachable : public Error {
public:
    TargetUnreachable(const std::string& msg, double stall_position_um)
        : Error("TargetUnreachable", msg), stall_position_um_(stall_position_um) {}

    double stall_position_um() const noexcept { return stall_position_um_; }

private:
    double stall_position_um_;
};

class InsufficientCycles : public Error {
public:
    explicit InsufficientCycles(const std::string& msg) : Error("InsufficientCycles", msg) {}
};

class NoPeriodicity : public Error {
public:
    explicit NoPeriodicity(const std::string& msg) : Error("NoPeriodicity", msg) {}
};

class NoCyclesFound : public Error {
public:
    explicit NoCyclesFound(const std::string& msg) : Error("NoCyclesFound", msg) {}
};

class EmptyWindow : public Error {
public:
    explicit EmptyWindow(const std::string& msg) : Error("EmptyWindow", msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error("IoError", msg) {}
};

}  // namespace wingreg
