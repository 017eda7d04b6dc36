import sys
import dotenv

sys.path.insert(0, "src")
dotenv.load_dotenv()
