#pragma once

#include "circuit.hpp"
#include "count.hpp"
#include "error.hpp"
#include "format.hpp"
#include "oracle.hpp"
#include "preprocess.hpp"
#include "query.hpp"
#include "stream.hpp"
