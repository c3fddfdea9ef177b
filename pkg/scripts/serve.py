"""Start the decision service with the shipped configuration.

Seeds data/ from the small fixture catalog on first run so the service has
products to work with. RELIFE_CONFIG points at an alternative config file.
"""

from __future__ import annotations

import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from relife.service import ServiceState, create_app, load_service_config  # noqa: E402


def main() -> None:
    import uvicorn

    config = load_service_config()
    catalog_path = Path(config.catalog_path)
    if not catalog_path.exists():
        catalog_path.parent.mkdir(parents=True, exist_ok=True)
        shutil.copy(ROOT / "fixtures" / "catalog_small.json", catalog_path)
        print(f"seeded {catalog_path} from fixtures/catalog_small.json")
    state = ServiceState(config)
    uvicorn.run(create_app(state), host=config.host, port=config.port)


if __name__ == "__main__":
    main()
