#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace negbench::text {

// Treebank-style tokenization: whitespace split, punctuation peeled off word
// edges, clitics split ("isn't" -> "is" "n't", "can't" -> "ca" "n't",
// "man's" -> "man" "'s", "others'" -> "others" "'"). Case is preserved.
// Throws Error(kEmptyCaption) for empty or whitespace-only input.
std::vector<std::string> tokenize(std::string_view text);

// Inverse of tokenize(): single spaces, except that clitics and closing
// punctuation attach to the previous token and opening brackets to the next.
// tokenize(detokenize(tokenize(s))) == tokenize(s).
std::string detokenize(std::span<const std::string> tokens);

}  // namespace negbench::text
