#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "topicdet/corpus.hpp"
#include "topicdet/panm.hpp"

namespace topicdet {

/// Trained model plus what is needed to use it safely: the pooling layout and
/// a hash of the vocabulary the model was trained against.
///
/// Text layout:
///
///   topicdet-checkpoint 1
///   pooling mean max min
///   vocab_hash 0123456789abcdef
///   vocab_size 1234
///   matrix M 100 100
///   <one line per row, space-separated values>
///   matrix M1 300 300
///   ...
struct Checkpoint {
  PanmParams params;
  PoolingSpec pooling;
  std::uint64_t vocab_hash = 0;
  std::size_t vocab_size = 0;
};

std::string to_text(const Checkpoint& checkpoint);
Checkpoint parse_checkpoint(std::string_view text);

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);

/// Reads a checkpoint and, when `expected` is given, verifies its vocabulary
/// hash against it.
Checkpoint read_checkpoint(const std::filesystem::path& path,
                           const Vocabulary* expected = nullptr);

}  // namespace topicdet
