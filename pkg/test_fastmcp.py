#!/usr/bin/env python3
"""
Tests for the FastMCP server tools, driven through the client against the
in-process server object.
"""

import asyncio
import sys
from pathlib import Path

# Add the src directory to the path
sys.path.insert(0, str(Path(__file__).parent / "src"))

from lbfl_solver.core import instance_to_dict
from lbfl_solver.core.samples import example_e1, line_instance
from lbfl_solver.mcp import LbflFastMCPClient, alpha_ledger_sync, check_solution_sync, solve_instance_sync
from lbfl_solver.mcp.fastmcp_server import mcp

E1 = instance_to_dict(example_e1())


def fresh_client() -> LbflFastMCPClient:
    return LbflFastMCPClient(mcp)


def test_list_tools():
    tools = asyncio.run(fresh_client().list_tools())
    assert set(tools) >= {"generate_instance", "solve_instance", "check_solution", "oracle_solve", "alpha_ledger"}


def test_solve_instance_tool():
    result = solve_instance_sync(E1, oracle=True, client=fresh_client())
    assert "error" not in result, result
    assert result["cost"]["exact"] == "11"
    assert result["solution"]["open"] == ["a"]
    assert result["report"]["ratio"]["exact"] == "1"


def test_solve_instance_errors():
    infeasible = instance_to_dict(line_instance([("x", 0, 1, 5)], [("c1", 0), ("c2", 1)]))
    result = solve_instance_sync(infeasible, client=fresh_client())
    assert result.get("exit_code") == 2

    result = solve_instance_sync(E1, beta="1/3", client=fresh_client())
    assert result.get("exit_code") == 4


def test_check_solution_tool():
    ok = check_solution_sync(E1, {"open": ["a"], "assign": {"c1": "a", "c2": "a", "c3": "a"}}, client=fresh_client())
    assert ok["feasible"] and ok["cost"]["exact"] == "11"

    short = check_solution_sync(E1, {"open": ["a", "b"], "assign": {"c1": "a", "c2": "a", "c3": "b"}},
                                client=fresh_client())
    assert not short["feasible"] and short["issues"]


def test_alpha_ledger_tool():
    ledger = alpha_ledger_sync("2/3", 5, client=fresh_client())
    assert (ledger["alpha4"], ledger["alpha2"], ledger["alpha1"], ledger["alpha"]) == ("20", "140", "560", "3926")
    assert alpha_ledger_sync(client=fresh_client())["alpha"] == "7062"


def test_generate_and_oracle_tools():
    client = fresh_client()
    generated = asyncio.run(client.call_tool("generate_instance", {"seed": 3, "profile": "tiny"}))
    assert generated["seed"] == 3 and "facilities" in generated["instance"]

    exact = asyncio.run(fresh_client().call_tool("oracle_solve", {"instance": E1}))
    assert exact["feasible"] and exact["cost"]["exact"] == "11"

    unknown = asyncio.run(fresh_client().call_tool("generate_instance", {"seed": 1, "profile": "nope"}))
    assert "error" in unknown


def main():
    """Run all MCP tests."""
    tests = [
        test_list_tools,
        test_solve_instance_tool,
        test_solve_instance_errors,
        test_check_solution_tool,
        test_alpha_ledger_tool,
        test_generate_and_oracle_tools,
    ]
    print("🧪 Testing FastMCP server...")
    print("=" * 50)
    failed = 0
    for test in tests:
        try:
            test()
            print(f"✅ {test.__name__}")
        except Exception as e:
            failed += 1
            print(f"❌ {test.__name__}: {e}")
    print("=" * 50)
    print(f"🎯 {len(tests) - failed}/{len(tests)} passed")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
