#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "negbench/text/token.hpp"

namespace negbench::testing {

// Builds a TaggedCaption from space-separated surfaces and tags.
inline text::TaggedCaption tagged(const std::string& surfaces,
                                  const std::string& tags,
                                  std::string caption_id = "c",
                                  std::string video_id = "v") {
  std::istringstream ss(surfaces), ts(tags);
  text::TaggedCaption tc{std::move(caption_id), std::move(video_id), {}};
  std::string s, t;
  while (ss >> s) {
    ts >> t;
    tc.tokens.push_back(text::Token{s, t, tc.tokens.size()});
  }
  return tc;
}

inline std::string fixture(const std::string& name) {
  return std::string(NEGBENCH_FIXTURES) + "/" + name;
}

}  // namespace negbench::testing
