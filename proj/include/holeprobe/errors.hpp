/**
 * Exception types shared by every holeprobe module.
 */
#ifndef HOLEPROBE_ERRORS_HPP
#define HOLEPROBE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace holeprobe {

enum class ErrorKind
{
    InvalidSimplex,
    NotFound,
    IndexOutOfRange,
    InvalidWeight,
    IncompatibleWeights,
    DegenerateInput,
    Numeric,
    InsufficientSpectrum,
    Multiplicity,
    FlipDetected,
    Parameter,
    ConstructionBug,
    Parse
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind)
    {
        case ErrorKind::InvalidSimplex:       return "invalid simplex";
        case ErrorKind::NotFound:             return "not found";
        case ErrorKind::IndexOutOfRange:      return "index out of range";
        case ErrorKind::InvalidWeight:        return "invalid weight";
        case ErrorKind::IncompatibleWeights:  return "incompatible weights";
        case ErrorKind::DegenerateInput:      return "degenerate input";
        case ErrorKind::Numeric:              return "numeric failure";
        case ErrorKind::InsufficientSpectrum: return "insufficient spectrum";
        case ErrorKind::Multiplicity:         return "degenerate eigenvalue";
        case ErrorKind::FlipDetected:         return "triangulation flip";
        case ErrorKind::Parameter:            return "invalid parameter";
        case ErrorKind::ConstructionBug:      return "construction check failed";
        case ErrorKind::Parse:                return "parse error";
    }
    return "unknown";
}

/**
 * Base exception; `kind()` lets callers (the CLI in particular) map failures
 * onto exit codes without string matching.
 */
class Error : public std::runtime_error
{
    public:
        Error(ErrorKind kind, const std::string& what)
            : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
        {
        }

        ErrorKind kind() const noexcept { return kind_; }

    private:
        ErrorKind kind_;
};

}   // namespace holeprobe

#endif
