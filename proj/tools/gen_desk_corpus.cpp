// Regenerates data/desk_corpus.json. The committed file is the frozen copy;
// rerunning with the default seed reproduces it byte for byte.
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "corpus_gen.hpp"

int main(int argc, char** argv) {
  const std::string out = argc > 1 ? argv[1] : std::string(LEAKWARDEN_DATA_DIR) + "/desk_corpus.json";
  const std::uint64_t seed = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 20240611;
  const std::size_t count = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 200;

  const auto corpus = lwtest::make_desk_corpus(seed, count);
  std::ofstream f(out, std::ios::binary);
  if (!f) {
    std::cerr << "cannot write " << out << "\n";
    return 1;
  }
  f << leakwarden::serialize_corpus(corpus);
  std::cout << "wrote " << corpus.documents.size() << " documents to " << out << "\n";
  return 0;
}
