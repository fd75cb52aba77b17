#include "osagent/resources.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>

#include "osagent/errors.hpp"
#include "osagent/util.hpp"

namespace osagent {

namespace fs = std::filesystem;

std::string default_data_dir() {
    if (const char* env = std::getenv("OSAGENT_DATA_DIR")) {
        if (*env && fs::is_directory(env)) return env;
    }
#ifdef OSAGENT_SOURCE_DATA_DIR
    if (fs::is_directory(OSAGENT_SOURCE_DATA_DIR)) return OSAGENT_SOURCE_DATA_DIR;
#endif
    if (fs::is_directory("core/data")) return "core/data";
    throw SchemaError("cannot locate the data directory; set OSAGENT_DATA_DIR");
}

std::string PromptPack::full_system(int demo_count) const {
    std::string out = system_text;
    int n = std::min<int>(demo_count, static_cast<int>(demos.size()));
    for (int i = 0; i < n; i++) {
        out += "\n\n# Worked Example " + std::to_string(i + 1) + "\n\n";
        out += demos[static_cast<size_t>(i)];
    }
    return out;
}

PromptPack load_prompt_pack(const std::string& data_dir) {
    PromptPack pack;
    pack.system_text = read_file(data_dir + "/prompts/system_prompt.txt");

    std::string sop_dir = data_dir + "/prompts/sop";
    if (fs::is_directory(sop_dir)) {
        std::vector<std::string> files;
        for (const auto& e : fs::directory_iterator(sop_dir))
            if (e.path().extension() == ".txt") files.push_back(e.path().string());
        std::sort(files.begin(), files.end());
        if (!files.empty()) {
            pack.system_text += "\n# Decomposition Templates\n";
            for (const std::string& f : files) {
                pack.system_text += "\n";
                pack.system_text += read_file(f);
            }
        }
    }

    std::string demo_dir = data_dir + "/prompts/demos";
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(demo_dir))
        if (e.path().extension() == ".txt") files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    for (const std::string& f : files) pack.demos.push_back(read_file(f));
    return pack;
}

} // namespace osagent
