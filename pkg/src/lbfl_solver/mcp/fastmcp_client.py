#!/usr/bin/env python3
"""
FastMCP client for the LBFL solver server.
Talks to the server script over stdio, or to an in-process ``FastMCP`` object.
"""

import asyncio
import concurrent.futures
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from fastmcp import Client, FastMCP

logger = logging.getLogger("lbfl-fastmcp-client")

ServerTarget = Union[str, Path, FastMCP]


def _decode(result) -> Dict[str, Any]:
    """Tool results arrive as a content array; the first text item carries the JSON."""
    if result and hasattr(result, "content") and result.content:
        content = result.content[0]
        if hasattr(content, "text"):
            try:
                return json.loads(content.text)
            except json.JSONDecodeError:
                return {"result": content.text}
        return {"result": str(content)}
    return {"error": "No content returned from tool"}


class LbflFastMCPClient:
    """FastMCP client for the solver server."""

    def __init__(self, server: Optional[ServerTarget] = None):
        if server is None:
            server = (Path(__file__).parent / "fastmcp_server.py").resolve()
        self.server = server if isinstance(server, FastMCP) else str(server)
        self.client: Optional[Client] = None
        self._connected = False

    async def ensure_connected(self) -> bool:
        """Ensure client is connected, connect if not."""
        if self._connected and self.client:
            return True
        try:
            self.client = Client(self.server)
            async with self.client:
                await self.client.ping()
            self._connected = True
            logger.info("✅ Connected to FastMCP server successfully")
            return True
        except Exception as e:
            logger.error(f"❌ Failed to connect to FastMCP server: {e}")
            logger.error(f"   Server: {self.server}")
            self._connected = False
            self.client = None
            return False

    async def call_tool(self, tool_name: str, arguments: Dict[str, Any]) -> Dict[str, Any]:
        """Call a tool, retrying once on a fresh connection."""
        if not await self.ensure_connected():
            return {"error": "Failed to connect to FastMCP server"}
        try:
            async with self.client:
                return _decode(await self.client.call_tool(tool_name, arguments))
        except Exception as e:
            logger.error(f"Error calling tool {tool_name}: {e}")
            self._connected = False
            self.client = None
            try:
                if await self.ensure_connected():
                    async with self.client:
                        return _decode(await self.client.call_tool(tool_name, arguments))
            except Exception as retry_e:
                logger.error(f"Retry also failed for tool {tool_name}: {retry_e}")
            return {"error": str(e)}

    async def list_tools(self) -> List[str]:
        """Get list of available tool names."""
        if not await self.ensure_connected():
            return []
        try:
            async with self.client:
                tools = await self.client.list_tools()
                return [tool.name for tool in tools]
        except Exception as e:
            logger.error(f"Error listing tools: {e}")
            self._connected = False
            return []

    async def solve_instance(self, instance: Dict[str, Any], beta: str = "2/3",
                             oracle: bool = False) -> Dict[str, Any]:
        return await self.call_tool("solve_instance", {"instance": instance, "beta": beta, "oracle": oracle})

    async def check_solution(self, instance: Dict[str, Any], solution: Dict[str, Any]) -> Dict[str, Any]:
        return await self.call_tool("check_solution", {"instance": instance, "solution": solution})

    async def alpha_ledger(self, beta: str = "2/3", alpha_cfl: int = 9) -> Dict[str, Any]:
        return await self.call_tool("alpha_ledger", {"beta": beta, "alpha_cfl": alpha_cfl})


# Global client instance
_fastmcp_client: Optional[LbflFastMCPClient] = None


def get_fastmcp_client() -> LbflFastMCPClient:
    """Get or create the global FastMCP client instance."""
    global _fastmcp_client
    if _fastmcp_client is None:
        _fastmcp_client = LbflFastMCPClient()
    return _fastmcp_client


def _run_async_safely(coro):
    """Run a coroutine from sync code, even when an event loop is already running."""
    try:
        asyncio.get_running_loop()
    except RuntimeError:
        return asyncio.run(coro)

    def run_in_thread():
        new_loop = asyncio.new_event_loop()
        try:
            asyncio.set_event_loop(new_loop)
            return new_loop.run_until_complete(coro)
        finally:
            new_loop.close()
            asyncio.set_event_loop(None)

    with concurrent.futures.ThreadPoolExecutor() as executor:
        return executor.submit(run_in_thread).result(timeout=120)


def solve_instance_sync(instance: Dict[str, Any], beta: str = "2/3", oracle: bool = False,
                        client: Optional[LbflFastMCPClient] = None) -> Dict[str, Any]:
    """Synchronous wrapper for ``solve_instance``."""
    try:
        return _run_async_safely((client or get_fastmcp_client()).solve_instance(instance, beta, oracle))
    except Exception as e:
        logger.error(f"Error in solve_instance_sync: {e}")
        return {"error": str(e)}


def check_solution_sync(instance: Dict[str, Any], solution: Dict[str, Any],
                        client: Optional[LbflFastMCPClient] = None) -> Dict[str, Any]:
    """Synchronous wrapper for ``check_solution``."""
    try:
        return _run_async_safely((client or get_fastmcp_client()).check_solution(instance, solution))
    except Exception as e:
        logger.error(f"Error in check_solution_sync: {e}")
        return {"error": str(e)}


def alpha_ledger_sync(beta: str = "2/3", alpha_cfl: int = 9,
                      client: Optional[LbflFastMCPClient] = None) -> Dict[str, Any]:
    """Synchronous wrapper for ``alpha_ledger``."""
    try:
        return _run_async_safely((client or get_fastmcp_client()).alpha_ledger(beta, alpha_cfl))
    except Exception as e:
        logger.error(f"Error in alpha_ledger_sync: {e}")
        return {"error": str(e)}
