from bincorr.cli import main

raise SystemExit(main())
