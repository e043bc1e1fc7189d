#pragma once

#include "vtcp/errors.hpp"
#include "vtcp/tensor.hpp"
#include "vtcp/products.hpp"
#include "vtcp/search.hpp"
#include "vtcp/classes.hpp"
#include "vtcp/solvers.hpp"
#include "vtcp/registry.hpp"
#include "vtcp/generate.hpp"
#include "vtcp/io.hpp"
