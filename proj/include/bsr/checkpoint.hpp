#ifndef BSR_CHECKPOINT_HPP
#define BSR_CHECKPOINT_HPP

#include <string>

#include "bsr/config.hpp"

namespace bsr {

class CheckpointError : public std::runtime_error {
  public:
    explicit CheckpointError(const std::string& why)
        : std::runtime_error("checkpoint error: " + why) {}
};

/// JSON state checkpoint, schema version 1. Numbers are written with 17
/// significant digits so a load reproduces u and v bitwise.
std::string serialize_state(const StatePair& state, const GeometryConfig& geom,
                            const ModelParams& p);
void save_state(const std::string& path, const StatePair& state,
                const GeometryConfig& geom, const ModelParams& p);

struct Checkpoint {
    StatePair state;
    GeometryConfig geometry;
    ModelParams params;
};

/// Rejects missing fields, truncated input, and schema versions other
/// than 1 with an explicit CheckpointError.
Checkpoint deserialize_state(const std::string& text);
Checkpoint load_state(const std::string& path);

} // namespace bsr

#endif
