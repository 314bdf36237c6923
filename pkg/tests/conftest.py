import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

EXAMPLE1 = "public Config tokenUrl(String tokenUrl) {\n    this.tokenUrl = tokenUrl;\n    return this; }"

EXAMPLE1_SBTAO = (
    "( unit ( function ( specifier ) specifier_OTHER ( type ( name ) name_OTHER ) type "
    "( name ) name_OTHER ( parameter_list ( parameter ( decl ( type ( name ) name_String ) type "
    "( name ) name_OTHER ) decl ) parameter ) parameter_list ( block ( expr_stmt ( expr ( name "
    "( name ) name_OTHER ( operator ) operator_OTHER ( name ) name_OTHER ) name ( operator ) "
    "operator_OTHER ( name ) name_OTHER ) expr ) expr_stmt ( return ( expr ( name ) name_OTHER ) "
    "expr ) return ) block ) function ) unit"
)


@pytest.fixture
def example1():
    return EXAMPLE1
