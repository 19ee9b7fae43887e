#pragma once

#include <string>

#include "istat/sequence.hpp"

namespace istat::cli {

inline constexpr int kFormatVersion = 1;

/// Sequence document:
///   {"format_version": 1, "meta": {"name": "..."},
///    "pieces": [{"guard": "<set>", "formula": "<formula>"}, ...],
///    "default": "<formula>"}
/// Throws ParseError; positions inside a guard or formula are offsets into that
/// string and the message names the field.
SequenceSpec parse_sequence_document(const std::string& text);

/// Canonical document text (2-space indented JSON, keys in schema order).
std::string sequence_document(const SequenceSpec& x);

/// `.csv` paths are imported as data prefixes, everything else as documents.
/// Throws std::runtime_error when the file cannot be read.
SequenceSpec load_sequence(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace istat::cli
