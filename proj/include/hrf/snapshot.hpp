#pragma once

// Binary snapshot container.
//
//   "HRFSNAP1" | u32 record count | records...
//   record = u16 key length | key bytes | u8 type (1: f64, 2: i64) | u64 count | payload
//
// All integers and doubles are little-endian; doubles are stored bit for bit,
// so write -> read -> write reproduces the file exactly. Records written, in
// order: n, m, flat, r, t, g0 (a, b, c), alpha (value at t), alpha_schedule
// (t0, a0, t1, a1, ...), u (n*n, x-major), phi (components * n * n).

#include <stdexcept>
#include <string>

#include "hrf/flow.hpp"

namespace hrf {

class SnapshotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string encode_snapshot(const FlowState& state);
FlowState decode_snapshot(const std::string& bytes);

void write_snapshot(const std::string& path, const FlowState& state);
FlowState read_snapshot(const std::string& path);

}  // namespace hrf
