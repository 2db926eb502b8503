#pragma once

#include <string>
#include <vector>

#include "meclab/ad/params.hpp"

namespace meclab::ad {

// Flat binary parameter container.
//
// Layout (little-endian):
//   magic   4 bytes  "MECK"
//   version 1 byte   0x01
//   count   u32      number of records
//   record: u16 name length, name bytes,
//           u32 rows, u32 cols,
//           rows*cols f64 row-major values
//
// Values round-trip bit-exactly. Optimizer moments are not stored.

struct CheckpointRecord {
  std::string name;
  Tensor value;
};

void save_checkpoint(const std::string& path,
                     const std::vector<CheckpointRecord>& records);
std::vector<CheckpointRecord> load_checkpoint(const std::string& path);

// Convenience: dump a ParamSet with a name prefix / restore values into an
// already-shaped ParamSet (shapes must match).
std::vector<CheckpointRecord> to_records(const ParamSet& params,
                                         const std::string& prefix);
void restore_params(ParamSet& params, const std::string& prefix,
                    const std::vector<CheckpointRecord>& records);

}  // namespace meclab::ad
