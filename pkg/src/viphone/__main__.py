from viphone.cli import main

main()
