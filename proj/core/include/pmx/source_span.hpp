#pragma once

#include <cstddef>

namespace pmx {

/// Half-open byte range [begin, end) into the source text a datum was read
/// from. Spans survive parsing so static errors can point at source.
struct SourceSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool contains(const SourceSpan& inner) const {
    return begin <= inner.begin && inner.end <= end;
  }
};

}  // namespace pmx
