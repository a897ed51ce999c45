#include "hsel/error.hpp"

namespace hsel {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::InvalidDistribution: return "invalid-distribution";
        case ErrorKind::DomainMismatch: return "domain-mismatch";
        case ErrorKind::EmptySample: return "empty-sample";
        case ErrorKind::OptInfeasible: return "opt-infeasible";
        case ErrorKind::NotConverged: return "not-converged";
        case ErrorKind::Config: return "config";
        case ErrorKind::Io: return "io";
    }
    return "unknown";
}

}  // namespace hsel
