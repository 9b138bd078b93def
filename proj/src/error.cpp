#include "qgraph/error.hpp"

#include <sstream>

namespace qgraph {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::DuplicateEdge: return "DuplicateEdge";
    case ErrorCode::SelfLoop: return "SelfLoop";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::VertexOutOfRange: return "VertexOutOfRange";
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::LengthCountMismatch: return "LengthCountMismatch";
    case ErrorCode::AllDegreeTwo: return "AllDegreeTwo";
    case ErrorCode::NonSimpleResult: return "NonSimpleResult";
    case ErrorCode::NotRepresentable: return "NotRepresentable";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::TopologyMismatch: return "TopologyMismatch";
    case ErrorCode::MuOutOfRange: return "MuOutOfRange";
    case ErrorCode::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorCode::MaxIterations: return "MaxIterations";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::NearSingularEdge: return "NearSingularEdge";
    case ErrorCode::SingularIterate: return "SingularIterate";
    case ErrorCode::NotSingular: return "NotSingular";
    case ErrorCode::NonVertexLambda: return "NonVertexLambda";
    case ErrorCode::NotNullvector: return "NotNullvector";
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

namespace {
std::string near_singular_message(int edge, double z) {
  std::ostringstream os;
  os.precision(17);
  os << "sin(sqrt(z) * l_e) vanishes for edge " << edge << " at z = " << z;
  return os.str();
}
}  // namespace

NearSingularEdgeError::NearSingularEdgeError(int edge, double z)
    : Error(ErrorCode::NearSingularEdge, near_singular_message(edge, z)), edge_(edge) {}

}  // namespace qgraph
