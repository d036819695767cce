#pragma once

#include <stdexcept>
#include <string>

namespace lpinfer {

// Base error carrying a stable machine-readable code (surfaced by the CLI
// as the "code" field of the structured error object).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(what), code_(std::move(code)) {}
    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define LPINFER_DEFINE_ERROR(Name, code_str)                        \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& what)                      \
            : Error(code_str, what) {}                              \
    }

LPINFER_DEFINE_ERROR(InsufficientLocalData, "insufficient_local_data");
LPINFER_DEFINE_ERROR(DegenerateScaling, "degenerate_scaling");
LPINFER_DEFINE_ERROR(DegenerateVariance, "degenerate_variance");
LPINFER_DEFINE_ERROR(LeverageOne, "leverage_one");
LPINFER_DEFINE_ERROR(InvalidAlpha, "invalid_alpha");
LPINFER_DEFINE_ERROR(InvalidProbability, "invalid_probability");
LPINFER_DEFINE_ERROR(InvalidRange, "invalid_range");
LPINFER_DEFINE_ERROR(InvalidArgument, "invalid_argument");
LPINFER_DEFINE_ERROR(ZeroCurvature, "zero_curvature");
LPINFER_DEFINE_ERROR(QuadratureNonconvergence, "quadrature_nonconvergence");
LPINFER_DEFINE_ERROR(SingularMomentMatrix, "singular_moment_matrix");
LPINFER_DEFINE_ERROR(ParseError, "parse_error");
LPINFER_DEFINE_ERROR(SchemaError, "schema_error");
LPINFER_DEFINE_ERROR(DesignMismatch, "design_mismatch");
LPINFER_DEFINE_ERROR(RngFailure, "rng_failure");

#undef LPINFER_DEFINE_ERROR

}  // namespace lpinfer
