#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pmx/value.hpp"

namespace pmx {

enum class TraceKind {
  TypeTest,
  LiteralTest,
  PredApply,
  AppApply,
  Bind,
  LoopIter,
  Success,
  FailureJump,
};

std::string_view trace_kind_name(TraceKind kind);

struct TraceEvent {
  TraceKind kind;
  std::string occurrence;  // formatted occurrence, "-" when not applicable
  std::string detail;
  // Structured payload used by replay.
  std::string bind_name;
  std::optional<Value> bind_value;
  int rhs_index = -1;
  int expr_id = -1;
};

/// Collects the events of match executions. One sink may span several
/// executions; replay expects the events of exactly one.
class TraceSink {
 public:
  void record(TraceEvent event) { events_.push_back(std::move(event)); }
  const std::vector<TraceEvent>& events() const { return events_; }
  void clear() { events_.clear(); }

  /// One `<step> <kind> @<occurrence> <detail>` line per event.
  std::string format() const;

 private:
  std::vector<TraceEvent> events_;
};

}  // namespace pmx
