#pragma once

#include <filesystem>
#include <stdexcept>

#include "coauth/q_network.hpp"

namespace coauth {

inline constexpr std::uint32_t kCheckpointVersion = 1;

class CheckpointError : public std::runtime_error {
public:
    enum class Kind { io, version, dims };
    CheckpointError(Kind k, const std::string& msg) : std::runtime_error(msg), kind_(k) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

/// Little-endian: "CAQN", u32 version, five u32 dims (paper, agent, network,
/// encoder, hidden), u64 parameter count, then float64 parameters in layer order.
void save_checkpoint(const QNetwork& net, const std::filesystem::path& path);
QNetwork load_checkpoint(const std::filesystem::path& path);
/// Also rejects a file whose dims differ from `expected`.
QNetwork load_checkpoint(const std::filesystem::path& path, const NetworkDims& expected);

}  // namespace coauth
