import asyncio
import csv
from pathlib import Path
from typing import Any, Dict, List

import streamlit as st

from hymis.config import settings
from hymis.service_client import ReductionServiceClient


TABLE_COLUMNS = ["instance", "n", "m", "e_avg", "n_r", "m_r", "e_avg_r", "t", "offset"]


def load_rows(path: str) -> List[Dict[str, Any]]:
    csv_path = Path(path)
    if not csv_path.is_file():
        return []
    with csv_path.open(encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


def _number(row: Dict[str, Any], key: str) -> float:
    try:
        return float(row.get(key) or 0)
    except ValueError:
        return 0.0


async def reduce_via_service(text: str, no_unconfined: bool) -> Dict[str, Any]:
    async with ReductionServiceClient(
        settings.service_url,
        timeout=settings.request_timeout_seconds,
        retries=settings.request_retries,
    ) as client:
        return await client.reduce(text, no_unconfined=no_unconfined)


st.set_page_config(page_title="hymis", layout="wide")
st.title("Hypergraph MIS reductions")

st.subheader("Env status")
col1, col2, col3 = st.columns(3)
col1.metric("HYMIS_STATS_CSV", settings.stats_csv)
col2.metric("HYMIS_SERVICE_URL", settings.service_url or "missing")
col3.metric("HYMIS_THREADS", str(settings.threads))

st.divider()

csv_source = st.text_input("stats csv", value=settings.stats_csv)
rows = load_rows(csv_source)
failed = [row for row in rows if row.get("error")]
solved = [row for row in rows if not row.get("error")]

st.subheader("Counters")
count_col1, count_col2, count_col3, count_col4 = st.columns(4)
count_col1.metric("instances", str(len(rows)))
count_col2.metric("errors", str(len(failed)))
count_col3.metric("empty kernels", str(sum(1 for row in solved if _number(row, "n_r") == 0)))
total_n = sum(_number(row, "n") for row in solved)
total_n_r = sum(_number(row, "n_r") for row in solved)
count_col4.metric("kernel size", f"{100 * total_n_r / total_n:.1f} %" if total_n else "-")

st.subheader("Reduction overview")
st.dataframe([{k: row.get(k) for k in TABLE_COLUMNS} for row in solved], use_container_width=True)
if failed:
    st.subheader("Failures")
    st.dataframe([{"instance": row.get("instance"), "error": row.get("error")} for row in failed])

st.divider()

st.subheader("Reduce via service")
upload = st.file_uploader("hMetis instance", type=["hgr"])
no_unconfined = st.checkbox("skip unconfined rule")
if upload is not None and st.button("reduce"):
    text = upload.getvalue().decode("utf-8", errors="replace")
    try:
        payload = asyncio.run(reduce_via_service(text, no_unconfined))
    except Exception as exc:  # noqa: BLE001
        st.error(f"reduction failed: {exc}")
    else:
        st.json(payload["stats"])
        st.download_button("kernel.hgr", payload["kernel"], file_name=f"{Path(upload.name).stem}.kernel.hgr")
