#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <sys/wait.h>

#include "annoaudit/text.hpp"

namespace annoaudit {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

void ExtractorRegistry::add(std::string media_type, Extractor extractor) {
  extractors_[ascii_lower(media_type)] = std::move(extractor);
}

void ExtractorRegistry::add_command(std::string media_type, std::string command) {
  add(std::move(media_type),
      [command = std::move(command)](std::string_view body) { return run_filter_command(command, body); });
}

const Extractor* ExtractorRegistry::find(std::string_view media_type) const {
  auto it = extractors_.find(ascii_lower(media_type));
  return it == extractors_.end() ? nullptr : &it->second;
}

std::optional<std::string> run_filter_command(const std::string& command, std::string_view input) {
  namespace fs = std::filesystem;
  std::string tmpl = (fs::temp_directory_path() / "annoaudit-extract-XXXXXX").string();
  int fd = mkstemp(tmpl.data());
  if (fd < 0) return std::nullopt;
  {
    std::size_t off = 0;
    while (off < input.size()) {
      auto n = ::write(fd, input.data() + off, input.size() - off);
      if (n <= 0) {
        ::close(fd);
        ::unlink(tmpl.c_str());
        return std::nullopt;
      }
      off += static_cast<std::size_t>(n);
    }
    ::close(fd);
  }

  std::string full = "(" + command + ") < '" + tmpl + "'";
  FILE* pipe = ::popen(full.c_str(), "r");
  if (!pipe) {
    ::unlink(tmpl.c_str());
    return std::nullopt;
  }
  std::string out;
  std::array<char, 8192> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  int status = ::pclose(pipe);
  ::unlink(tmpl.c_str());
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) return std::nullopt;
  return out;
}

}  // namespace annoaudit
