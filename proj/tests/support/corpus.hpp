// Shared access to the shipped corpus.

#ifndef CG_TESTS_CORPUS_HPP_
#define CG_TESTS_CORPUS_HPP_

#include <string>

#include "cg/loader.hpp"

namespace cgtest {

std::string corpus_path(const std::string& file);
std::string read_file(const std::string& path);

// The PvH corpus, loaded once.
const cg::LoadResult& corpus();

// Parses `text` with the graph's fixities and elaborates it in `theory`.
cg::Term term_in(const cg::ContextGraph& g, const std::string& theory, const std::string& text,
                 const std::optional<cg::Term>& expected = std::nullopt);

// Elaborates and normalizes both sides in `theory` and compares them.
bool same_in(const cg::ContextGraph& g, const std::string& theory, const cg::Term& a, const cg::Term& b);

}  // namespace cgtest

#endif  // CG_TESTS_CORPUS_HPP_
