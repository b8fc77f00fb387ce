#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "scs/corpus.hpp"
#include "scs/operations.hpp"
#include "scs/ontology.hpp"
#include "scs/storyteller.hpp"

namespace scs {

// Everything a workspace directory holds, parsed and cross-validated.
struct WorkspaceSnapshot {
    Ontology ontology;
    std::vector<ModelTemplate> models;
    Corpus corpus;
    std::map<std::string, Scenario> scenarios;
    TypeDefinitions definitions;
};

// Directory layout:
//   ontology.json  models/*.json  corpus.json  scenarios/*.json
//   definitions.json (optional)   publications/<scenario id>.json
class Workspace {
public:
    explicit Workspace(std::filesystem::path root) : root_(std::move(root)) {}

    const std::filesystem::path& root() const { return root_; }
    std::filesystem::path corpus_path() const { return root_ / "corpus.json"; }
    std::filesystem::path publication_path(const std::string& scenario_id) const {
        return root_ / "publications" / (scenario_id + ".json");
    }

    // Strict load: throws IoError / JsonSyntax for unreadable files and the
    // core error codes for invalid content (first violation wins).
    WorkspaceSnapshot load() const;

    void save_corpus(const Corpus& corpus) const;
    std::filesystem::path write_publication(const PublicationManifest& manifest) const;

private:
    std::filesystem::path root_;
};

struct CheckEntry {
    std::string file;
    std::string location;
    std::string code;
    std::string message;
};

struct CheckResult {
    int exit_code = 0;  // 0 clean, 1 violations, 2 unreadable/unparseable
    std::vector<CheckEntry> entries;
};

// Loads and cross-validates everything, collecting every violation.
CheckResult check_workspace(const std::filesystem::path& root);

// Compiles and writes publications/<scenario_id>.json.
PublicationManifest publish(const Workspace& ws, const std::string& scenario_id,
                            PublicationMode mode);

std::string read_file(const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);
std::string dump_json(const nlohmann::json& doc);  // 2-space indent, trailing newline

// Writes through a sibling temp file, fsync and rename, so readers and
// crashes only ever observe the old or the new content.
void atomic_write(const std::filesystem::path& path, std::string_view content);

// Test hook called at the named stages of atomic_write ("temp_opened",
// "half_written", "before_rename", "renamed"). Pass {} to clear.
void set_write_fault_hook(std::function<void(std::string_view stage)> hook);

}  // namespace scs
