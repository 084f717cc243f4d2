from pislice.cli import main

raise SystemExit(main())
