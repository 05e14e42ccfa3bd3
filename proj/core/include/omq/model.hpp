#pragma once

// Core data model: terms, atoms, schemas, substitutions, queries,
// dependencies, instances and databases.

#include "omq/atom.hpp"
#include "omq/errors.hpp"
#include "omq/instance.hpp"
#include "omq/query.hpp"
#include "omq/substitution.hpp"
#include "omq/term.hpp"
