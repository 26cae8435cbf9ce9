from p3fox.cli import main

raise SystemExit(main())
