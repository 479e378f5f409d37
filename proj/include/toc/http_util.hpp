#pragma once

#include <memory>
#include <string>
#include <utility>

namespace httplib {
class Client;
}

namespace toc {

// Splits "http://host:port/path" into a connected client and the path
// component ("/" when absent). Throws Error on an unparseable endpoint.
std::pair<std::unique_ptr<httplib::Client>, std::string>
make_http_client(const std::string& endpoint);

std::string url_encode(const std::string& value);

} // namespace toc
