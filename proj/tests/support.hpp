#pragma once

#include <filesystem>
#include <memory>
#include <random>
#include <string>

#include "retriever/corpus.hpp"
#include "retriever/ranker.hpp"

#ifndef FIXTURE_DIR
#error "FIXTURE_DIR must be defined by the build"
#endif

namespace support {

inline std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(FIXTURE_DIR) / rel;
}

inline retriever::corpus::ResourcePaths resource_paths(const std::string& set) {
  const auto dir = fixture(set);
  return {(dir / "embeddings.txt").string(), (dir / "lexicon.tsv").string(),
          (dir / "stopwords.txt").string(), (dir / "gazetteer.json").string()};
}

inline std::shared_ptr<const retriever::Resources> resources(const std::string& set) {
  return retriever::Resources::load(resource_paths(set));
}

inline retriever::corpus::CorpusStore build_store(const retriever::Resources& res,
                                                  const std::filesystem::path& manifest) {
  const auto parsed = retriever::corpus::parse_manifest(manifest, res.gazetteer);
  auto store = retriever::corpus::build_corpus(parsed, res.pipeline, res.embeddings);
  store.resources = res.paths;
  return store;
}

inline std::unique_ptr<retriever::Retriever> retriever_for(
    const std::string& set, retriever::RankingConfig config = {}) {
  auto res = resources(set);
  auto store = build_store(*res, fixture(set) / "manifest.json");
  return std::make_unique<retriever::Retriever>(res, std::move(store), config);
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("rtv-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

// Thai text used in several suites.
inline const std::string kImportQuery = "ขอข้อมูลเกี่ยวกับการนำเข้าสินค้าในเมียนมาร์หน่อยค่ะ";
inline const std::string kImportHeading = "กฎระเบียบการนำเข้าสินค้าในเมียนมาร์";
inline const std::string kInvestHeading = "กฎหมายการลงทุนในเมียนมาร์";
inline const std::string kLogisticsHeading = "ระบบโลจิสติกส์และการขนส่งในเมียนมาร์";

}  // namespace support
