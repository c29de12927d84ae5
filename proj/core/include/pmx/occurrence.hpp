#pragma once

#include <string>
#include <vector>

#include "pmx/value.hpp"

namespace pmx {

/// One accessor step along an occurrence path.
struct OccStep {
  enum class Kind { Head, Tail, Field };
  Kind kind;
  StructTag tag;        // Field only
  int field_index = 0;  // Field only
};

/// An access path from a register root into a value. Root 0 is the
/// scrutinee; app transforms and sequence loops introduce fresh roots
/// because their results are not sub-paths of the scrutinee.
struct Occurrence {
  int root = 0;
  std::vector<OccStep> steps;

  Occurrence head() const {
    Occurrence o = *this;
    o.steps.push_back({OccStep::Kind::Head, nullptr, 0});
    return o;
  }
  Occurrence tail() const {
    Occurrence o = *this;
    o.steps.push_back({OccStep::Kind::Tail, nullptr, 0});
    return o;
  }
  Occurrence field(StructTag tag, int index) const {
    Occurrence o = *this;
    o.steps.push_back({OccStep::Kind::Field, std::move(tag), index});
    return o;
  }
};

/// Renders an occurrence as `r<root>` followed by `.hd`, `.tl`, or
/// `.fld(name,i)` steps.
std::string format_occurrence(const Occurrence& occ);

}  // namespace pmx
