#pragma once

#include "trl/service.hpp"

#include <httplib.h>

#include <memory>

namespace trl::service {

/// Routes every GET under /datasets to `api`, with permissive CORS.
void mount(httplib::Server& server, std::shared_ptr<const Api> api);

} // namespace trl::service
