#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace biwalk {

// Lowercase a UTF-8 string using Unicode simple case folding for the Latin
// blocks (ASCII, Latin-1 Supplement, Latin Extended-A). Code points outside
// those blocks pass through unchanged; malformed bytes pass through as-is.
std::string fold_case(std::string_view text);

// Split on runs of ASCII whitespace.
std::vector<std::string_view> split_ws(std::string_view line);

// Split on single tab characters; empty fields are preserved.
std::vector<std::string_view> split_tab(std::string_view line);

// Number of whitespace-delimited tokens in a line.
std::size_t count_ws_tokens(std::string_view line);

// Strip a trailing '\r' (corpora may come from CRLF sources).
std::string_view strip_cr(std::string_view line);

// True for blank lines and lines whose first non-space character is '#'.
bool is_comment_or_blank(std::string_view line);

// FNV-1a 64-bit over bytes; used for content hashes in manifests and for
// multiset-of-lines equality checks.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::string& path);

// Read a whole text file split into lines ('\n', trailing '\r' stripped).
std::vector<std::string> read_lines(const std::string& path);

// Write lines joined with '\n' (and a final newline when non-empty).
void write_lines(const std::string& path, const std::vector<std::string>& lines);

}  // namespace biwalk
