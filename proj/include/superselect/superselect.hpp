#pragma once

#include "superselect/apps.hpp"
#include "superselect/bit_vector.hpp"
#include "superselect/combinations.hpp"
#include "superselect/construct.hpp"
#include "superselect/core.hpp"
#include "superselect/decode.hpp"
#include "superselect/errors.hpp"
#include "superselect/ftable.hpp"
#include "superselect/io.hpp"
#include "superselect/sizing.hpp"
