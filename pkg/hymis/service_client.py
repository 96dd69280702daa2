import asyncio
import logging
from typing import Any, Dict, Optional

import httpx

from hymis.logging_utils import log_structured


RETRY_STATUSES = frozenset({429, 500, 502, 503, 504})


class ServiceError(Exception):
    def __init__(self, status_code: int, detail: str) -> None:
        super().__init__(f"{status_code}: {detail}")
        self.status_code = status_code
        self.detail = detail


class ReductionServiceClient:
    def __init__(
        self,
        base_url: str,
        timeout: float,
        retries: int,
        backoff: float = 0.5,
        transport: Optional[httpx.AsyncBaseTransport] = None,
    ) -> None:
        self.retries = retries
        self.backoff = backoff
        self._client = httpx.AsyncClient(base_url=base_url.rstrip("/"), timeout=timeout, transport=transport)

    async def close(self) -> None:
        await self._client.aclose()

    async def __aenter__(self) -> "ReductionServiceClient":
        return self

    async def __aexit__(self, *exc_info: Any) -> None:
        await self.close()

    async def _send(self, method: str, path: str, **kwargs: Any) -> httpx.Response:
        failure: Optional[Exception] = None
        for attempt in range(self.retries + 1):
            if attempt:
                await asyncio.sleep(self.backoff * (2 ** (attempt - 1)))
            try:
                response = await self._client.request(method, path, **kwargs)
            except httpx.RequestError as exc:
                failure = exc
                log_structured(logging.WARNING, "request_retry", path=path, attempt=attempt, error=str(exc))
                continue
            if response.status_code in RETRY_STATUSES:
                failure = ServiceError(response.status_code, response.text)
                log_structured(logging.WARNING, "request_retry", path=path, attempt=attempt, status=response.status_code)
                continue
            if response.is_error:
                try:
                    detail = response.json().get("detail", response.text)
                except ValueError:
                    detail = response.text
                raise ServiceError(response.status_code, str(detail))
            return response
        assert failure is not None
        raise failure

    async def health(self) -> bool:
        response = await self._send("GET", "/health")
        return response.json().get("status") == "ok"

    async def reduce(
        self,
        instance: str,
        rules: Optional[str] = None,
        time_limit: Optional[float] = None,
        no_unconfined: bool = False,
    ) -> Dict[str, Any]:
        params: Dict[str, Any] = {"no_unconfined": no_unconfined}
        if rules:
            params["rules"] = rules
        if time_limit is not None:
            params["time_limit"] = time_limit
        response = await self._send("POST", "/reduce", content=instance.encode("utf-8"), params=params)
        return response.json()

    async def solve(
        self,
        instance: str,
        time_limit: Optional[float] = None,
        reduce_first: bool = True,
    ) -> Dict[str, Any]:
        params: Dict[str, Any] = {"reduce_first": reduce_first}
        if time_limit is not None:
            params["time_limit"] = time_limit
        response = await self._send("POST", "/solve", content=instance.encode("utf-8"), params=params)
        return response.json()

    async def stats(self, instance: str) -> Dict[str, Any]:
        response = await self._send("POST", "/stats", content=instance.encode("utf-8"))
        return response.json()
