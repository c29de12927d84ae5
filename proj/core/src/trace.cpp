#include "pmx/trace.hpp"

#include <sstream>

namespace pmx {

std::string_view trace_kind_name(TraceKind kind) {
  switch (kind) {
    case TraceKind::TypeTest: return "type-test";
    case TraceKind::LiteralTest: return "literal-test";
    case TraceKind::PredApply: return "pred-apply";
    case TraceKind::AppApply: return "app-apply";
    case TraceKind::Bind: return "bind";
    case TraceKind::LoopIter: return "loop-iter";
    case TraceKind::Success: return "success";
    case TraceKind::FailureJump: return "failure-jump";
  }
  return "unknown";
}

std::string TraceSink::format() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < events_.size(); ++i) {
    const TraceEvent& e = events_[i];
    out << i << " " << trace_kind_name(e.kind) << " @" << e.occurrence
        << " " << e.detail << "\n";
  }
  return out.str();
}

}  // namespace pmx
